use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A Laurent polynomial in one variable with exact rational coefficients.
///
/// Stored sparsely as exponent -> coefficient; zero coefficients are never kept.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The variable `z`.
    pub fn z() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    pub fn monomial(c: BigRational, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    /// `z^exp` with unit coefficient.
    pub fn z_pow(exp: i64) -> Self {
        Self::monomial(BigRational::one(), exp)
    }

    /// Builds from `(exponent, integer coefficient)` pairs; repeated exponents accumulate.
    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in iter {
            p.add_term(e, BigRational::from_integer(c.into()));
        }
        p
    }

    pub fn from_rational_terms<I: IntoIterator<Item = (i64, BigRational)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        self.terms.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Highest exponent, `None` for the zero polynomial.
    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Lowest exponent, `None` for the zero polynomial.
    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.terms.values().next_back()
    }

    pub fn trailing_coeff(&self) -> Option<&BigRational> {
        self.terms.values().next()
    }

    /// True when every exponent is non-negative.
    pub fn is_polynomial(&self) -> bool {
        self.min_exp().is_none_or(|e| e >= 0)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation at a rational point. Negative exponents at `0` are a pole.
    pub fn eval(&self, z0: &BigRational) -> Result<BigRational> {
        if z0.is_zero() && self.min_exp().is_some_and(|e| e < 0) {
            return Err(Error::Pole(z0.to_string()));
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            acc += c * pow_rational(z0, *e);
        }
        Ok(acc)
    }

    /// Substitutes `z -> a * z^sign` (sign = +1 or -1), i.e. `c z^e -> c a^e z^(sign e)`.
    pub fn substitute_monomial(&self, a: &BigRational, sign: i64) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(e * sign, c * pow_rational(a, *e));
        }
        out
    }

    /// Splits off the largest power of `z` dividing the polynomial: `self = z^k * rest`
    /// with `rest(0) != 0`. Returns `(k, rest)`; zero maps to `(0, 0)`.
    pub fn split_z_power(&self) -> (i64, LaurentPoly) {
        match self.min_exp() {
            None => (0, Self::zero()),
            Some(k) => (k, self.shift(-k)),
        }
    }

    /// Positive rational `c` such that `self / c` has coprime integer coefficients.
    pub fn content(&self) -> BigRational {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return BigRational::one();
        }
        BigRational::new(num_gcd, den_lcm)
    }

    /// Integer-coefficient primitive part whose lowest-exponent coefficient is positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.trailing_coeff().is_some_and(|t| t.is_negative()) {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Makes the leading (highest exponent) coefficient one.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Polynomial long division. Both operands must be polynomials (no negative exponents).
    pub fn div_rem(&self, divisor: &LaurentPoly) -> Result<(LaurentPoly, LaurentPoly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        debug_assert!(self.is_polynomial() && divisor.is_polynomial());
        let d_deg = divisor.max_exp().unwrap();
        let d_lc = divisor.leading_coeff().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(r_deg) = rem.max_exp() {
            if r_deg < d_deg {
                break;
            }
            let factor = rem.leading_coeff().unwrap() / &d_lc;
            let k = r_deg - d_deg;
            for (e, c) in divisor.terms() {
                rem.add_term(e + k, -(c * &factor));
            }
            quot.add_term(k, factor);
        }
        Ok((quot, rem))
    }

    /// Exact quotient in the Laurent ring `Q[z, 1/z]`; fails if the division is not exact.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (ka, a) = self.split_z_power();
        let (kb, b) = divisor.split_z_power();
        let (q, r) = a.div_rem(&b)?;
        if !r.is_zero() {
            return Err(Error::Inexact);
        }
        Ok(q.shift(ka - kb))
    }

    /// Monic gcd in `Q[z]` of the z-free parts; `gcd(0, 0) = 0`.
    pub fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
        let mut x = a.split_z_power().1;
        let mut y = b.split_z_power().1;
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y).expect("nonzero divisor");
            x = y;
            y = r.primitive_part();
        }
        x.monic()
    }

    /// Rational roots of the polynomial part (z = 0 excluded), each listed once, ascending.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let (_, p) = self.split_z_power();
        if p.max_exp().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let p = p.primitive_part();
        let a0 = p.coeff(0).numer().abs();
        let an = p.leading_coeff().unwrap().numer().abs();
        let mut roots = Vec::new();
        for num in divisors(&a0) {
            for den in divisors(&an) {
                for sign in [1i32, -1] {
                    let cand = BigRational::new(&num * BigInt::from(sign), den.clone());
                    if !roots.contains(&cand) && p.eval(&cand).is_ok_and(|v| v.is_zero()) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

fn pow_rational(x: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// Positive divisors of a positive integer by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in rhs.terms() {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    /// Ascending exponents, e.g. `2-2z^2`, `z^-1+3/2z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { "-" } else { "+" })?;
            }
            let abs = c.abs();
            if e == 0 {
                write!(f, "{abs}")?;
                continue;
            }
            if !abs.is_one() {
                write!(f, "{abs}")?;
            }
            if e == 1 {
                write!(f, "z")?;
            } else {
                write!(f, "z^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn display_is_ascending() {
        let p = LaurentPoly::from_terms([(2, -2), (0, 2)]);
        assert_eq!(p.to_string(), "2-2z^2");
        let p = LaurentPoly::from_rational_terms([(-1, r(1, 1)), (1, r(3, 2))]);
        assert_eq!(p.to_string(), "z^-1+3/2z");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!((-LaurentPoly::z()).to_string(), "-z");
    }

    #[test]
    fn division_and_gcd() {
        // (1 - 4z^2) = (1 - 2z)(1 + 2z)
        let a = LaurentPoly::from_terms([(0, 1), (2, -4)]);
        let b = LaurentPoly::from_terms([(0, 1), (1, 2)]);
        let q = a.div_exact(&b).unwrap();
        assert_eq!(q, LaurentPoly::from_terms([(0, 1), (1, -2)]));
        let g = LaurentPoly::poly_gcd(&a, &b.shift(3));
        assert_eq!(g, LaurentPoly::from_rational_terms([(0, r(1, 2)), (1, r(1, 1))]));
        assert!(a.div_exact(&LaurentPoly::from_terms([(0, 1), (1, 1)])).is_err());
    }

    #[test]
    fn rational_roots_of_quadratic() {
        let a = LaurentPoly::from_terms([(0, 1), (2, -4)]);
        assert_eq!(a.rational_roots(), vec![r(-1, 2), r(1, 2)]);
        let irreducible = LaurentPoly::from_terms([(0, 2), (2, -1)]);
        assert!(irreducible.rational_roots().is_empty());
    }

    #[test]
    fn eval_pole_at_zero() {
        let p = LaurentPoly::z_pow(-1);
        assert!(matches!(p.eval(&BigRational::zero()), Err(Error::Pole(_))));
        assert_eq!(p.eval(&r(1, 4)).unwrap(), r(4, 1));
    }
}
