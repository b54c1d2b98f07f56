use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::laurent::LaurentPoly;
use super::parse::parse_rational_func;
use crate::error::{Error, Result};

/// A rational function in `z`, always held in canonical form.
///
/// Canonical form: `num / den` in lowest terms over `Q[z]`, where `den` is an
/// integer polynomial with nonzero, positive constant term and content one.
/// Any power of `z` lives in `num`. Structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    pub fn zero() -> Self {
        RationalFunc { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn z() -> Self {
        Self::from_poly(LaurentPoly::z())
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(LaurentPoly::from_int(c))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFunc { num: p, den: LaurentPoly::one() }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1, i.e. the value is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    fn canonical(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (kn, n) = num.split_z_power();
        let (kd, d) = den.split_z_power();
        let g = LaurentPoly::poly_gcd(&n, &d);
        let (n, d) = if g.max_exp() == Some(0) {
            (n, d)
        } else {
            (n.div_exact(&g).expect("gcd divides"), d.div_exact(&g).expect("gcd divides"))
        };
        // den: primitive integer polynomial with positive constant term
        let mut c = d.content();
        if d.coeff(0).is_negative() {
            c = -c;
        }
        let inv = c.recip();
        RationalFunc { num: n.scale(&inv).shift(kn - kd), den: d.scale(&inv) }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RationalFunc) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(&self.num * &other.den, &self.den * &other.num))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::canonical(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Exact evaluation; a zero of the denominator (or `z = 0` with a negative
    /// power in the numerator) is reported as [`Error::Pole`].
    pub fn eval(&self, z0: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(z0)?;
        if d.is_zero() {
            return Err(Error::Pole(z0.to_string()));
        }
        Ok(self.num.eval(z0)? / d)
    }

    /// The involution `z -> 1/(q z)`, i.e. `s -> 1 - s` under `z = q^{-s}`.
    pub fn dual_substitute(&self, q: u32) -> Self {
        let a = BigRational::from_integer(BigInt::from(q)).recip();
        Self::canonical(self.num.substitute_monomial(&a, -1), self.den.substitute_monomial(&a, -1))
    }

    /// Rational zeros of the denominator, ascending.
    pub fn rational_poles(&self) -> Vec<BigRational> {
        self.den.rational_roots()
    }
}

impl Add for &RationalFunc {
    type Output = RationalFunc;
    fn add(self, rhs: &RationalFunc) -> RationalFunc {
        if self.den == rhs.den {
            return RationalFunc::canonical(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunc::canonical(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Sub for &RationalFunc {
    type Output = RationalFunc;
    fn sub(self, rhs: &RationalFunc) -> RationalFunc {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunc {
    type Output = RationalFunc;
    fn mul(self, rhs: &RationalFunc) -> RationalFunc {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunc::zero();
        }
        RationalFunc::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunc {
    type Output = RationalFunc;
    fn neg(self) -> RationalFunc {
        RationalFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Add for RationalFunc {
    type Output = RationalFunc;
    fn add(self, rhs: RationalFunc) -> RationalFunc {
        &self + &rhs
    }
}

impl Sub for RationalFunc {
    type Output = RationalFunc;
    fn sub(self, rhs: RationalFunc) -> RationalFunc {
        &self - &rhs
    }
}

impl Mul for RationalFunc {
    type Output = RationalFunc;
    fn mul(self, rhs: RationalFunc) -> RationalFunc {
        &self * &rhs
    }
}

impl Neg for RationalFunc {
    type Output = RationalFunc;
    fn neg(self) -> RationalFunc {
        -&self
    }
}

impl From<LaurentPoly> for RationalFunc {
    fn from(p: LaurentPoly) -> Self {
        RationalFunc::from_poly(p)
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl fmt::Debug for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunc{self}")
    }
}

impl FromStr for RationalFunc {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_rational_func(s)
    }
}

impl serde::Serialize for RationalFunc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for RationalFunc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn p(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn z_times_inverse_is_one() {
        let z = RationalFunc::z();
        assert!((&z * &z.recip().unwrap()).is_one());
    }

    #[test]
    fn reciprocal_pair_multiplies_to_one() {
        // (1 - q^2 z^2) / (q (1 - z^2)) with q = 3, times its reciprocal
        let a = RationalFunc::new(p(&[(0, 1), (2, -9)]), p(&[(0, 3), (2, -3)])).unwrap();
        let b = RationalFunc::new(p(&[(0, 3), (2, -3)]), p(&[(0, 1), (2, -9)])).unwrap();
        assert!((&a * &b).is_one());
    }

    #[test]
    fn add_z_to_itself() {
        let z = RationalFunc::z();
        assert_eq!(&z + &z, RationalFunc::from_poly(p(&[(1, 2)])));
    }

    #[test]
    fn canonical_denominator_has_positive_constant_term() {
        let x = RationalFunc::new(p(&[(0, 4), (2, -4)]), p(&[(0, -2), (2, 8)])).unwrap();
        // (4 - 4z^2)/(-2 + 8z^2) = (-2 + 2z^2)/(1 - 4z^2)
        assert_eq!(x.to_string(), "(-2+2z^2)/(1-4z^2)");
        let shifted = RationalFunc::new(p(&[(1, 1)]), p(&[(3, 2), (4, 2)])).unwrap();
        assert_eq!(shifted.to_string(), "(1/2z^-2)/(1+z)");
    }

    #[test]
    fn dual_substitute_example_q2() {
        // (1 - 4z^2)/(2(1 - z^2)) -> 2(1 - z^2)/(1 - 4z^2)
        let x = RationalFunc::new(p(&[(0, 1), (2, -4)]), p(&[(0, 2), (2, -2)])).unwrap();
        let expected = RationalFunc::new(p(&[(0, 2), (2, -2)]), p(&[(0, 1), (2, -4)])).unwrap();
        assert_eq!(x.dual_substitute(2), expected);
        assert_eq!(x.dual_substitute(2).dual_substitute(2), x);
        assert_eq!(RationalFunc::z().dual_substitute(5).to_string(), "(1/5z^-1)/(1)");
    }

    #[test]
    fn eval_examples() {
        assert_eq!(RationalFunc::z().eval(&r(1, 4)).unwrap(), r(1, 4));
        let x = RationalFunc::new(p(&[(0, 2), (2, -2)]), p(&[(0, 1), (2, -4)])).unwrap();
        assert_eq!(x.eval(&r(1, 4)).unwrap(), r(5, 2));
        let pole = RationalFunc::new(LaurentPoly::one(), p(&[(0, 1), (1, -1)])).unwrap();
        assert!(matches!(pole.eval(&r(1, 1)), Err(Error::Pole(_))));
    }

    #[test]
    fn division_by_zero_rejected() {
        assert_eq!(RationalFunc::one().div(&RationalFunc::zero()), Err(Error::DivisionByZero));
        assert!(RationalFunc::new(LaurentPoly::one(), LaurentPoly::zero()).is_err());
    }
}
