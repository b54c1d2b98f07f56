//! Real roots and Weyl words for the rank-2 Cartan matrix `[[2, -m], [-m, 2]]`.
//!
//! Words act right to left: the word "12" is the map `r -> w1(w2(r))`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanMatrix {
    m: u32,
}

impl CartanMatrix {
    pub fn new(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!("m must be at least 2, got {m}")));
        }
        Ok(CartanMatrix { m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn is_affine(&self) -> bool {
        self.m == 2
    }

    pub fn entry(&self, i: u8, j: u8) -> i64 {
        if i == j {
            2
        } else {
            -(self.m as i64)
        }
    }
}

/// A root `a*alpha1 + b*alpha2`. Serializes as the string `(a,b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootVector {
    pub a: BigInt,
    pub b: BigInt,
}

impl RootVector {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        RootVector { a: a.into(), b: b.into() }
    }

    pub fn simple(i: u8) -> Self {
        if i == 1 {
            Self::new(1, 0)
        } else {
            Self::new(0, 1)
        }
    }

    pub fn height(&self) -> BigInt {
        &self.a + &self.b
    }

    pub fn is_positive(&self) -> bool {
        !self.a.is_negative() && !self.b.is_negative() && !(self.a.is_zero() && self.b.is_zero())
    }

    pub fn is_negative(&self) -> bool {
        (-self).is_positive()
    }

    /// `a^2 + b^2 - m a b`, equal to 1 exactly on real roots.
    pub fn norm(&self, cm: &CartanMatrix) -> BigInt {
        &self.a * &self.a + &self.b * &self.b - BigInt::from(cm.m) * &self.a * &self.b
    }
}

impl Serialize for RootVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl std::ops::Neg for &RootVector {
    type Output = RootVector;
    fn neg(self) -> RootVector {
        RootVector { a: -&self.a, b: -&self.b }
    }
}

impl std::ops::Neg for RootVector {
    type Output = RootVector;
    fn neg(self) -> RootVector {
        -&self
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// A word in the simple reflections, letters in {1, 2}.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylWord {
    letters: Vec<u8>,
}

impl WeylWord {
    pub fn identity() -> Self {
        WeylWord { letters: Vec::new() }
    }

    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if let Some(bad) = letters.iter().find(|&&l| l != 1 && l != 2) {
            return Err(Error::InvalidParameter(format!("letter {bad} is not 1 or 2")));
        }
        Ok(WeylWord { letters })
    }

    /// The alternating word of length `len` whose first letter is `first`.
    pub fn alternating(first: u8, len: usize) -> Self {
        let letters = (0..len).map(|k| if k % 2 == 0 { first } else { 3 - first }).collect();
        WeylWord { letters }
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<u8> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<u8> {
        self.letters.last().copied()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1])
    }

    /// Cancels adjacent equal letters until the word alternates. In the infinite
    /// dihedral group this is the unique reduced form.
    pub fn reduce(&self) -> Self {
        let mut out: Vec<u8> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        WeylWord { letters: out }
    }

    /// Length of the group element, i.e. of the reduced form.
    pub fn length(&self) -> usize {
        self.reduce().len()
    }

    pub fn inverse(&self) -> Self {
        WeylWord { letters: self.letters.iter().rev().copied().collect() }
    }

    pub fn concat(&self, other: &WeylWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        WeylWord { letters }
    }

    /// The word without its first letter.
    pub fn tail(&self) -> Self {
        WeylWord { letters: self.letters.iter().skip(1).copied().collect() }
    }

    /// All reduced words of length at most `max_len`.
    pub fn all_reduced(max_len: usize) -> Vec<WeylWord> {
        let mut out = vec![Self::identity()];
        for len in 1..=max_len {
            out.push(Self::alternating(1, len));
            out.push(Self::alternating(2, len));
        }
        out
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for WeylWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" {
            return Ok(Self::identity());
        }
        let letters = s
            .chars()
            .map(|c| match c {
                '1' => Ok(1),
                '2' => Ok(2),
                _ => Err(Error::Parse(format!("bad letter '{c}' in Weyl word"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(WeylWord { letters })
    }
}

pub fn reflect(i: u8, r: &RootVector, cm: &CartanMatrix) -> RootVector {
    let m = BigInt::from(cm.m);
    if i == 1 {
        RootVector { a: &m * &r.b - &r.a, b: r.b.clone() }
    } else {
        RootVector { a: r.a.clone(), b: &m * &r.a - &r.b }
    }
}

pub fn act(w: &WeylWord, r: &RootVector, cm: &CartanMatrix) -> RootVector {
    w.letters.iter().rev().fold(r.clone(), |acc, &i| reflect(i, &acc, cm))
}

/// `S+_w`, built by the recursion `S_w = {alpha_{i1}} u w_{i1} S_{w'}` where
/// `w = w_{i1} w'`. Listed in recursion order. `w` must be reduced.
pub fn inversion_set(w: &WeylWord, cm: &CartanMatrix) -> Vec<RootVector> {
    let mut out = Vec::with_capacity(w.len());
    // S_w = {a_{i1}, w_{i1} a_{i2}, w_{i1} w_{i2} a_{i3}, ...}
    for k in 0..w.len() {
        let prefix = WeylWord { letters: w.letters[..k].to_vec() };
        out.push(act(&prefix, &RootVector::simple(w.letters[k]), cm));
    }
    out
}

/// Whether `w^{-1} beta` is negative, the defining test for `beta` in `S_w`.
pub fn is_inverted(w: &WeylWord, beta: &RootVector, cm: &CartanMatrix) -> bool {
    act(&w.inverse(), beta, cm).is_negative()
}

/// Which `Delta^re_i` contains the real root `r`, found by descending the
/// positive root `r` (or `-r`) to a simple root. `None` for non-real vectors.
pub fn chain_of(r: &RootVector, cm: &CartanMatrix) -> Option<u8> {
    if r.norm(cm) != BigInt::from(1) {
        return None;
    }
    if r.is_negative() {
        return chain_of(&-r, cm).map(|i| 3 - i);
    }
    if !r.is_positive() {
        return None;
    }
    if *r == RootVector::simple(1) {
        return Some(1);
    }
    if *r == RootVector::simple(2) {
        return Some(2);
    }
    // the letter whose reflection lowers the height is the first letter of r's word
    let h = r.height();
    (1..=2u8).find(|&i| reflect(i, r, cm).height() < h)
}

/// Prefixes of `Delta^re_i`: `positive[k]` is the alternating word of length
/// `k` starting with `i` applied to the appropriate simple root, and
/// `negative[k]` is minus the analogous root for the other letter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaRe {
    pub i: u8,
    pub positive: Vec<RootVector>,
    pub negative: Vec<RootVector>,
}

impl DeltaRe {
    /// Bi-infinite index: `k >= 0` reads the positive chain, `k < 0` reads
    /// `negative[-k-1]`.
    pub fn get(&self, k: i64) -> Option<&RootVector> {
        if k >= 0 {
            self.positive.get(k as usize)
        } else {
            self.negative.get((-k - 1) as usize)
        }
    }

    pub fn index_of(&self, r: &RootVector) -> Option<i64> {
        if let Some(k) = self.positive.iter().position(|x| x == r) {
            return Some(k as i64);
        }
        self.negative.iter().position(|x| x == r).map(|k| -(k as i64) - 1)
    }
}

fn chain_root(first: u8, k: usize, cm: &CartanMatrix) -> RootVector {
    let base = if k.is_multiple_of(2) { first } else { 3 - first };
    act(&WeylWord::alternating(first, k), &RootVector::simple(base), cm)
}

pub fn delta_re_stream(i: u8, count: usize, cm: &CartanMatrix) -> DeltaRe {
    DeltaRe {
        i,
        positive: (0..count).map(|k| chain_root(i, k, cm)).collect(),
        negative: (0..count).map(|k| -chain_root(3 - i, k, cm)).collect(),
    }
}

/// Number of positive roots of `Delta^re_i` pushed out of the chain by the
/// translation `(w_i w_{3-i})^n`.
pub fn haar_index_exponent(i: u8, n: usize, cm: &CartanMatrix) -> usize {
    let len = 2 * n + 2;
    let chain = delta_re_stream(i, len, cm);
    let t = WeylWord::alternating(i, 2 * n);
    let image: HashSet<RootVector> = chain.positive.iter().map(|r| act(&t, r, cm)).collect();
    chain.positive.iter().filter(|r| !image.contains(*r)).count()
}

/// `S+_{w^{-1}}` is contained in `Delta^re_{i_k}` where `i_k` is the last
/// letter of `w`. Vacuous for the identity.
pub fn check_inversion_containment(w: &WeylWord, cm: &CartanMatrix) -> bool {
    let Some(last) = w.last() else { return true };
    inversion_set(&w.inverse(), cm).iter().all(|r| chain_of(r, cm) == Some(last))
}

/// Checks `S_w = {alpha_{i1}} u w_{i1} S_{w'}` against the definition of `S_w`:
/// the listed roots are distinct, positive, and inverted by `w`, and no other
/// root from a covering prefix of the positive chains is.
pub fn check_inversion_recursion(w: &WeylWord, cm: &CartanMatrix) -> bool {
    let s = inversion_set(w, cm);
    let Some(first) = w.first() else { return s.is_empty() };
    let mut expected = vec![RootVector::simple(first)];
    expected.extend(inversion_set(&w.tail(), cm).iter().map(|r| reflect(first, r, cm)));
    if s != expected {
        return false;
    }
    let set: HashSet<&RootVector> = s.iter().collect();
    if set.len() != w.len() || !s.iter().all(|r| r.is_positive() && is_inverted(w, r, cm)) {
        return false;
    }
    let cover = w.len() + 2;
    [1u8, 2]
        .iter()
        .all(|&i| delta_re_stream(i, cover, cm).positive.iter().all(|r| set.contains(r) == is_inverted(w, r, cm)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootPartition {
    pub inverted: Vec<RootVector>,
    pub complement: Vec<RootVector>,
}

/// Splits the truncated positive real roots (the first `depth` roots of each
/// positive chain) into `S+_w` and the rest.
pub fn root_partition(w: &WeylWord, depth: usize, cm: &CartanMatrix) -> Result<RootPartition> {
    let w = w.reduce();
    if depth < w.len() {
        return Err(Error::TruncationTooSmall(format!("depth {depth} is below the word length {}", w.len())));
    }
    let inverted = inversion_set(&w, cm);
    let set: HashSet<&RootVector> = inverted.iter().collect();
    let complement =
        [1u8, 2].iter().flat_map(|&i| delta_re_stream(i, depth, cm).positive).filter(|r| !set.contains(r)).collect();
    Ok(RootPartition { inverted, complement })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(m: u32) -> CartanMatrix {
        CartanMatrix::new(m).unwrap()
    }

    fn w(s: &str) -> WeylWord {
        s.parse().unwrap()
    }

    #[test]
    fn reflect_examples() {
        let c = cm(3);
        assert_eq!(reflect(1, &RootVector::new(1, 0), &c), RootVector::new(-1, 0));
        assert_eq!(reflect(1, &RootVector::new(0, 1), &c), RootVector::new(3, 1));
        assert_eq!(reflect(1, &RootVector::new(1, 3), &c), RootVector::new(8, 3));
        assert_eq!(reflect(1, &RootVector::new(0, 1), &cm(5)), RootVector::new(5, 1));
    }

    #[test]
    fn act_examples() {
        let c = cm(3);
        assert_eq!(act(&WeylWord::identity(), &RootVector::new(1, 0), &c), RootVector::new(1, 0));
        assert_eq!(act(&w("12"), &RootVector::new(1, 0), &c), RootVector::new(8, 3));
        assert_eq!(act(&w("11"), &RootVector::new(4, 7), &c), RootVector::new(4, 7));
    }

    #[test]
    fn word_reduction() {
        assert_eq!(w("1221").reduce(), WeylWord::identity());
        assert_eq!(w("12212").reduce(), w("2"));
        assert_eq!(w("1211").length(), 2);
        assert!(WeylWord::new(vec![1, 3]).is_err());
        assert!("13".parse::<WeylWord>().is_err());
    }

    #[test]
    fn inversion_set_examples() {
        assert_eq!(inversion_set(&w("1"), &cm(3)), vec![RootVector::new(1, 0)]);
        for m in 2..6 {
            assert_eq!(inversion_set(&w("12"), &cm(m)), vec![RootVector::new(1, 0), RootVector::new(m, 1)]);
        }
        let s = inversion_set(&w("121"), &cm(2));
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|r| (&r.a - &r.b).abs() == BigInt::from(1)));
        assert!(s.iter().all(|r| is_inverted(&w("121"), r, &cm(2))));
    }

    #[test]
    fn delta_re_examples() {
        let c = cm(3);
        let d = delta_re_stream(1, 2, &c);
        assert_eq!(d.negative, vec![RootVector::new(0, -1), RootVector::new(-1, -3)]);
        assert_eq!(d.positive, vec![RootVector::new(1, 0), RootVector::new(3, 1)]);
        for m in 2..6 {
            let c = cm(m);
            for i in 1..=2 {
                let d = delta_re_stream(i, 50, &c);
                assert!(d.positive.iter().chain(&d.negative).all(|r| r.norm(&c) == 1.into()));
                assert!(d.positive.iter().chain(&d.negative).all(|r| chain_of(r, &c) == Some(i)));
            }
        }
    }

    #[test]
    fn reflections_swap_streams_with_index_shift() {
        for m in 2..6 {
            let c = cm(m);
            let d1 = delta_re_stream(1, 30, &c);
            let d2 = delta_re_stream(2, 32, &c);
            for k in -29..29i64 {
                let r = d1.get(k).unwrap();
                assert_eq!(d2.index_of(&reflect(1, r, &c)), Some(k - 1));
                assert_eq!(d2.index_of(&reflect(2, r, &c)), Some(k + 1));
            }
        }
    }

    #[test]
    fn haar_examples() {
        let c = cm(3);
        assert_eq!(haar_index_exponent(1, 0, &c), 0);
        assert_eq!(haar_index_exponent(1, 1, &c), 2);
        assert_eq!(haar_index_exponent(2, 3, &c), 6);
    }

    #[test]
    fn containment_examples() {
        let c = cm(3);
        assert!(check_inversion_containment(&w("1"), &c));
        assert!(check_inversion_containment(&w("21"), &c));
        // the inverse word's roots, for contrast, sit in the other chain
        assert!(inversion_set(&w("21"), &c).iter().all(|r| chain_of(r, &c) == Some(2)));
    }

    #[test]
    fn partition_examples() {
        let c = cm(3);
        let p = root_partition(&WeylWord::identity(), 4, &c).unwrap();
        assert!(p.inverted.is_empty());
        assert_eq!(p.complement.len(), 8);
        let p = root_partition(&w("12"), 4, &c).unwrap();
        assert_eq!(p.inverted, vec![RootVector::new(1, 0), RootVector::new(3, 1)]);
        assert_eq!(p.complement.len(), 6);
        assert!(root_partition(&w("121"), 2, &c).is_err());
        assert!(check_inversion_recursion(&w("12"), &c));
    }

    #[test]
    fn chain_of_rejects_non_roots() {
        let c = cm(3);
        assert_eq!(chain_of(&RootVector::new(1, 1), &c), None);
        assert_eq!(chain_of(&RootVector::new(0, 0), &c), None);
    }
}
