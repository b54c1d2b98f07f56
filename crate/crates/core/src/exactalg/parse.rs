//! Parser for the canonical string grammar used on the CLI and in JSON/CSV output.
//!
//! ```text
//! func  := "(" poly ")" "/" "(" poly ")" | poly
//! poly  := ["-"] term (("+" | "-") term)*
//! term  := coeff | [coeff] "z" ["^" int]
//! coeff := uint ["/" uint]
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::laurent::LaurentPoly;
use super::rational::RationalFunc;
use crate::error::{Error, Result};

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {}", self.pos))
    }

    fn uint(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat(b'-');
        let v = self.uint().ok_or_else(|| self.err("expected integer"))?;
        let v: i64 = v.try_into().map_err(|_| self.err("exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn coeff(&mut self) -> Result<Option<BigRational>> {
        let Some(n) = self.uint() else { return Ok(None) };
        if self.eat(b'/') {
            let d = self.uint().ok_or_else(|| self.err("expected denominator"))?;
            if d.is_zero() {
                return Err(self.err("zero denominator"));
            }
            return Ok(Some(BigRational::new(n, d)));
        }
        Ok(Some(BigRational::from_integer(n)))
    }

    fn term(&mut self) -> Result<(i64, BigRational)> {
        let c = self.coeff()?;
        if self.eat(b'z') {
            let e = if self.eat(b'^') { self.int()? } else { 1 };
            return Ok((e, c.unwrap_or_else(BigRational::one)));
        }
        match c {
            Some(c) => Ok((0, c)),
            None => Err(self.err("expected term")),
        }
    }

    fn poly(&mut self) -> Result<LaurentPoly> {
        let mut p = LaurentPoly::zero();
        let mut negative = self.eat(b'-');
        loop {
            let (e, c) = self.term()?;
            p.add_term(e, if negative { -c } else { c });
            if self.eat(b'+') {
                negative = false;
            } else if self.eat(b'-') {
                negative = true;
            } else {
                return Ok(p);
            }
        }
    }
}

pub fn parse_laurent(s: &str) -> Result<LaurentPoly> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut cur = Cursor { s: compact.as_bytes(), pos: 0 };
    let p = cur.poly()?;
    if cur.pos != cur.s.len() {
        return Err(cur.err("trailing input"));
    }
    Ok(p)
}

pub fn parse_rational_func(s: &str) -> Result<RationalFunc> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut cur = Cursor { s: compact.as_bytes(), pos: 0 };
    let out = if cur.eat(b'(') {
        let num = cur.poly()?;
        cur.expect(b')')?;
        if cur.eat(b'/') {
            cur.expect(b'(')?;
            let den = cur.poly()?;
            cur.expect(b')')?;
            RationalFunc::new(num, den)?
        } else {
            RationalFunc::from_poly(num)
        }
    } else {
        RationalFunc::from_poly(cur.poly()?)
    };
    if cur.pos != cur.s.len() {
        return Err(cur.err("trailing input"));
    }
    Ok(out)
}

/// Parses `p`, `-p`, or `p/q` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
    let d: BigInt = den.parse().map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in '{s}'")));
    }
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_canonical_examples() {
        let x = parse_rational_func("(2-2z^2)/(1-4z^2)").unwrap();
        assert_eq!(x.to_string(), "(2-2z^2)/(1-4z^2)");
        let y = parse_rational_func("z^-1 + 3/2z").unwrap();
        assert_eq!(y.to_string(), "(z^-1+3/2z)/(1)");
        assert_eq!(parse_rational_func("(0)/(1)").unwrap(), RationalFunc::zero());
        assert_eq!(parse_rational("-7/21").unwrap(), BigRational::new((-1).into(), 3.into()));
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_rational_func("(1+z").is_err());
        assert!(parse_rational_func("(1)/(0)").is_err());
        assert!(parse_rational_func("1+").is_err());
        assert!(parse_rational_func("z^").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-4i64..5, -9i64..10, 1i64..4), 0..5).prop_map(|ts| {
            LaurentPoly::from_rational_terms(ts.into_iter().map(|(e, n, d)| (e, BigRational::new(n.into(), d.into()))))
        })
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(n in arb_poly(), d in arb_poly()) {
            prop_assume!(!d.is_zero());
            let x = RationalFunc::new(n, d).unwrap();
            let back: RationalFunc = x.to_string().parse().unwrap();
            prop_assert_eq!(back, x);
        }
    }
}
