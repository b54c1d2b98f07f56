//! Polynomials over a prime field F_p and 2x2 matrices over F_p[t].

use std::fmt;

use crate::error::{Error, Result};

pub fn check_prime(p: u32) -> Result<()> {
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
        return Err(Error::InvalidParameter(format!("oracle mode needs a prime q, got {p}")));
    }
    Ok(())
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat: a^(p-2)
    let (mut base, mut e, mut acc) = (a as u64 % p as u64, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Coefficients little-endian (`coeffs[k]` multiplies `t^k`), no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqPoly {
    p: u32,
    coeffs: Vec<u32>,
}

impl FqPoly {
    pub fn new(p: u32, coeffs: Vec<u32>) -> Self {
        let mut out = FqPoly { p, coeffs: coeffs.into_iter().map(|c| c % p).collect() };
        out.trim();
        out
    }

    pub fn zero(p: u32) -> Self {
        FqPoly { p, coeffs: Vec::new() }
    }

    pub fn constant(p: u32, c: u32) -> Self {
        Self::new(p, vec![c])
    }

    pub fn one(p: u32) -> Self {
        Self::constant(p, 1)
    }

    /// `c t^k`.
    pub fn monomial(p: u32, c: u32, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::new(p, coeffs)
    }

    /// The polynomial whose coefficient digits in base `p` are those of `index`.
    pub fn from_index(p: u32, mut index: u64) -> Self {
        let mut coeffs = Vec::new();
        while index > 0 {
            coeffs.push((index % p as u64) as u32);
            index /= p as u64;
        }
        FqPoly { p, coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u32 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn add(&self, o: &FqPoly) -> FqPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(self.p, (0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn neg(&self) -> FqPoly {
        Self::new(self.p, self.coeffs.iter().map(|&c| self.p - c).collect())
    }

    pub fn sub(&self, o: &FqPoly) -> FqPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: u32) -> FqPoly {
        let p = self.p as u64;
        Self::new(self.p, self.coeffs.iter().map(|&x| (x as u64 * c as u64 % p) as u32).collect())
    }

    pub fn mul(&self, o: &FqPoly) -> FqPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p as u64;
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u64 * b as u64) % p;
            }
        }
        Self::new(self.p, out.into_iter().map(|c| c as u32).collect())
    }

    /// `t^k * self`.
    pub fn shift(&self, k: usize) -> FqPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        FqPoly { p: self.p, coeffs }
    }

    pub fn div_rem(&self, d: &FqPoly) -> (FqPoly, FqPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = inv_mod(d.leading(), self.p);
        let p = self.p as u64;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u32; rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let f = (*rem.last().unwrap() as u64 * inv as u64 % p) as u32;
            quot[k] = f;
            for (j, &c) in d.coeffs.iter().enumerate() {
                let sub = (c as u64 * f as u64 % p) as u32;
                rem[k + j] = (rem[k + j] + self.p - sub) % self.p;
            }
            while rem.last() == Some(&0) {
                rem.pop();
            }
        }
        (Self::new(self.p, quot), Self::new(self.p, rem))
    }

    pub fn monic(&self) -> FqPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.p))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(a: &FqPoly, b: &FqPoly) -> FqPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.div_rem(&y).1;
            x = y;
            y = r;
        }
        x.monic()
    }

    /// `(g, u, v)` with `u a + v b = g = gcd(a, b)` monic.
    pub fn ext_gcd(a: &FqPoly, b: &FqPoly) -> (FqPoly, FqPoly, FqPoly) {
        let p = a.p;
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::zero(p));
        let (mut t0, mut t1) = (Self::zero(p), Self::one(p));
        while !r1.is_zero() {
            let (qt, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&qt.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&qt.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_mod(r0.leading(), p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// All polynomials of degree exactly `d` (`d = None` gives just zero).
    pub fn all_of_degree(p: u32, d: Option<usize>) -> Vec<FqPoly> {
        let Some(d) = d else { return vec![Self::zero(p)] };
        let lower = (p as u64).pow(d as u32);
        (1..p as u64).flat_map(|lead| (0..lower).map(move |low| Self::from_index(p, lead * lower + low))).collect()
    }

    pub fn monic_of_degree(p: u32, d: usize) -> Vec<FqPoly> {
        let lower = (p as u64).pow(d as u32);
        (0..lower).map(|low| Self::from_index(p, lower + low)).collect()
    }
}

impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}t")?,
                (k, 1) => write!(f, "t^{k}")?,
                (k, c) => write!(f, "{c}t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FqPoly[F_{}]({self})", self.p)
    }
}

/// `[[a, b], [c, d]]` over F_p[t].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix2 {
    pub a: FqPoly,
    pub b: FqPoly,
    pub c: FqPoly,
    pub d: FqPoly,
}

impl Matrix2 {
    pub fn new(a: FqPoly, b: FqPoly, c: FqPoly, d: FqPoly) -> Self {
        Matrix2 { a, b, c, d }
    }

    pub fn identity(p: u32) -> Self {
        Self::new(FqPoly::one(p), FqPoly::zero(p), FqPoly::zero(p), FqPoly::one(p))
    }

    /// `[[1, x], [0, 1]]`.
    pub fn unipotent(x: FqPoly) -> Self {
        let p = x.p();
        Self::new(FqPoly::one(p), x, FqPoly::zero(p), FqPoly::one(p))
    }

    /// `diag(u, 1/u)` for a unit `u`.
    pub fn torus(p: u32, u: u32) -> Self {
        Self::new(FqPoly::constant(p, u), FqPoly::zero(p), FqPoly::zero(p), FqPoly::constant(p, inv_mod(u, p)))
    }

    pub fn mul(&self, o: &Matrix2) -> Matrix2 {
        Matrix2 {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            c: self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            d: self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        }
    }

    pub fn det(&self) -> FqPoly {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    /// Determinant is a nonzero constant.
    pub fn is_unimodular(&self) -> bool {
        self.det().degree() == Some(0)
    }

    pub fn max_degree(&self) -> usize {
        [&self.a, &self.b, &self.c, &self.d].iter().filter_map(|x| x.degree()).max().unwrap_or(0)
    }
}

/// An element of SL2(F_p[t]) with bottom row `(c, d)`, which must be coprime.
pub fn complete_to_sl2(c: &FqPoly, d: &FqPoly) -> Result<Matrix2> {
    let (g, u, v) = FqPoly::ext_gcd(c, d);
    if !g.is_one() {
        return Err(Error::InvalidParameter(format!("bottom row ({c}, {d}) is not coprime")));
    }
    // u c + v d = 1, so [[v, -u], [c, d]] has determinant v d + u c = 1
    Ok(Matrix2::new(v, u.neg(), c.clone(), d.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u32, c: &[u32]) -> FqPoly {
        FqPoly::new(p, c.to_vec())
    }

    #[test]
    fn arithmetic_mod_p() {
        let a = poly(3, &[1, 2]); // 1 + 2t
        let b = poly(3, &[2, 1]); // 2 + t
        assert_eq!(a.add(&b), poly(3, &[0, 0]));
        assert!(a.add(&b).is_zero());
        assert_eq!(a.mul(&b), poly(3, &[2, 2, 2]));
        let (qt, r) = poly(3, &[2, 2, 2]).div_rem(&a);
        assert_eq!((qt, r), (b.clone(), FqPoly::zero(3)));
        assert_eq!(a.to_string(), "2t+1");
    }

    #[test]
    fn gcd_and_bezout() {
        let p = 2;
        let a = poly(p, &[1, 0, 1]); // (1+t)^2
        let b = poly(p, &[1, 1]);
        assert_eq!(FqPoly::gcd(&a, &b), b);
        let c = poly(p, &[1, 1, 1]);
        let (g, u, v) = FqPoly::ext_gcd(&a, &c);
        assert!(g.is_one());
        assert!(u.mul(&a).add(&v.mul(&c)).is_one());
        assert!(check_prime(4).is_err());
        assert!(check_prime(7).is_ok());
    }

    #[test]
    fn completion_is_unimodular() {
        let p = 3;
        let c = poly(p, &[1, 1, 1]);
        let d = poly(p, &[2, 0, 1, 1]);
        let g = complete_to_sl2(&c, &d).unwrap();
        assert!(g.det().is_one());
        assert!(complete_to_sl2(&poly(p, &[0, 1]), &poly(p, &[0, 2])).is_err());
    }

    #[test]
    fn degree_enumeration_counts() {
        assert_eq!(FqPoly::all_of_degree(3, Some(2)).len(), 18);
        assert_eq!(FqPoly::monic_of_degree(2, 4).len(), 16);
        assert!(FqPoly::monic_of_degree(5, 2).iter().all(|x| x.is_monic() && x.degree() == Some(2)));
    }
}
