//! Adjacency and radial operators on the tree and on the quotient ray.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{LaurentPoly, RationalFunc};
use crate::tree::{horosphere, Tree};

/// Exact values a vertex or ray function may carry.
pub trait Value: Clone + PartialEq + std::fmt::Display {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn sub(&self, other: &Self) -> Self;
    fn scale(&self, c: &BigRational) -> Self;
}

impl Value for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn scale(&self, c: &BigRational) -> Self {
        self * c
    }
}

impl Value for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        for (e, c) in other.terms() {
            self.add_term(e, c.clone());
        }
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn scale(&self, c: &BigRational) -> Self {
        LaurentPoly::scale(self, c)
    }
}

impl Value for RationalFunc {
    fn zero() -> Self {
        RationalFunc::zero()
    }
    fn is_zero(&self) -> bool {
        RationalFunc::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self = &*self + other;
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn scale(&self, c: &BigRational) -> Self {
        RationalFunc::scale(self, c)
    }
}

fn int(c: i64) -> BigRational {
    BigRational::from_integer(c.into())
}

/// A function on the ball of radius `radius`, i.e. on ids `0..tree.ball_len(radius)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexFunction<V> {
    pub radius: u32,
    pub values: Vec<V>,
}

impl<V: Value> VertexFunction<V> {
    pub fn from_fn(tree: &Tree, radius: u32, f: impl Fn(usize) -> V) -> Self {
        VertexFunction { radius, values: (0..tree.ball_len(radius)).map(f).collect() }
    }

    pub fn indicator(tree: &Tree, radius: u32, v: usize, one: V) -> Self {
        Self::from_fn(tree, radius, |id| if id == v { one.clone() } else { V::zero() })
    }

    pub fn get(&self, id: usize) -> &V {
        &self.values[id]
    }
}

/// `(Tf)(x) = sum of f over the neighbors of x`, on the ball one smaller than f's.
pub fn adjacency_apply<V: Value>(tree: &Tree, f: &VertexFunction<V>) -> Result<VertexFunction<V>> {
    if f.radius == 0 || f.radius > tree.radius() {
        return Err(Error::TruncationTooSmall(format!(
            "function radius {} cannot lose a layer in a radius-{} tree",
            f.radius,
            tree.radius()
        )));
    }
    Ok(VertexFunction::from_fn(tree, f.radius - 1, |x| {
        let mut acc = V::zero();
        for y in tree.neighbors(x) {
            acc.add_assign_ref(&f.values[y]);
        }
        acc
    }))
}

/// `Psi(v) = z^{H(v)}`.
pub fn psi(tree: &Tree) -> VertexFunction<LaurentPoly> {
    VertexFunction::from_fn(tree, tree.radius(), |id| LaurentPoly::z_pow(tree.height(id)))
}

/// `qz + 1/z`.
pub fn lambda(q: u32) -> LaurentPoly {
    LaurentPoly::from_terms([(1, q as i64), (-1, 1)])
}

/// Interior vertices where `T Psi != (qz + 1/z) Psi`. Empty on success.
pub fn eigen_exceptions(tree: &Tree) -> Vec<usize> {
    let lam = lambda(tree.q());
    let inner = tree.ball_len(tree.radius() - 1);
    (0..inner)
        .filter(|&x| {
            // neighbor heights are monomials; collect by exponent
            let mut sum: BTreeMap<i64, i64> = BTreeMap::new();
            for y in tree.neighbors(x) {
                *sum.entry(tree.height(y)).or_default() += 1;
            }
            LaurentPoly::from_terms(sum) != lam.shift(tree.height(x))
        })
        .collect()
}

/// A finitely supported point-pair kernel `K(x, y) = F(d(x, y))`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RadialKernel {
    pub coeffs: BTreeMap<u32, BigRational>,
}

impl RadialKernel {
    pub fn delta(n: u32) -> Self {
        RadialKernel { coeffs: [(n, BigRational::one())].into_iter().collect() }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, BigRational)>) -> Self {
        let coeffs = pairs.into_iter().filter(|(_, c)| !Zero::is_zero(c)).collect();
        RadialKernel { coeffs }
    }

    pub fn support(&self) -> u32 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }
}

/// Vertices at exact distance `n` from `x`; the caller guarantees the shell
/// lies inside the tree.
pub fn shell(tree: &Tree, x: usize, n: u32) -> Vec<usize> {
    let mut frontier = vec![(x, usize::MAX)];
    for _ in 0..n {
        let mut next = Vec::new();
        for (v, from) in frontier {
            next.extend(tree.neighbors(v).filter(|&u| u != from).map(|u| (u, v)));
        }
        frontier = next;
    }
    frontier.into_iter().map(|(v, _)| v).collect()
}

/// `(Kf)(x) = sum_n F(n) sum_{d(x,y)=n} f(y)`.
pub fn radial_apply<V: Value>(k: &RadialKernel, tree: &Tree, f: &VertexFunction<V>) -> Result<VertexFunction<V>> {
    let s = k.support();
    if s > f.radius {
        return Err(Error::TruncationTooSmall(format!("kernel support {s} exceeds the function radius {}", f.radius)));
    }
    Ok(VertexFunction::from_fn(tree, f.radius - s, |x| {
        let mut acc = V::zero();
        for (&n, c) in &k.coeffs {
            let mut shell_sum = V::zero();
            for y in shell(tree, x, n) {
                shell_sum.add_assign_ref(&f.values[y]);
            }
            acc.add_assign_ref(&shell_sum.scale(c));
        }
        acc
    }))
}

/// Eigenvalue of the distance-`n` shell operator on `Psi`:
/// `S_0 = 1`, `S_1 = qz + 1/z`, `S_2 = S_1^2 - (q+1)`, `S_{n+1} = S_1 S_n - q S_{n-1}`.
pub fn shell_eigenvalue(q: u32, n: u32) -> LaurentPoly {
    let s1 = lambda(q);
    match n {
        0 => LaurentPoly::one(),
        1 => s1,
        _ => {
            let mut prev = s1.clone();
            let mut cur = &(&s1 * &s1) - &LaurentPoly::from_int(q as i64 + 1);
            let qp = LaurentPoly::from_int(q as i64);
            for _ in 2..n {
                let next = &(&s1 * &cur) - &(&qp * &prev);
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

pub fn radial_eigenvalue(q: u32, k: &RadialKernel) -> LaurentPoly {
    let mut acc = LaurentPoly::zero();
    for (&n, c) in &k.coeffs {
        acc = &acc + &shell_eigenvalue(q, n).scale(c);
    }
    acc
}

/// Weighted horosphere average of `f` at level `k`, depth `d`.
pub fn constant_term<V: Value>(tree: &Tree, f: &VertexFunction<V>, k: i64, d: u32) -> Result<V> {
    let h = horosphere(tree, k, d)?;
    let mut acc = V::zero();
    for (&v, w) in h.members.iter().zip(&h.weights) {
        let value = f
            .values
            .get(v)
            .ok_or_else(|| Error::TruncationTooSmall(format!("horosphere member {v} outside the function domain")))?;
        acc.add_assign_ref(&value.scale(w));
    }
    Ok(acc)
}

/// Values at the ray vertices `sigma_0, sigma_1, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayFunction<V> {
    pub values: Vec<V>,
}

impl<V: Value> RayFunction<V> {
    pub fn new(values: Vec<V>) -> Self {
        RayFunction { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(V::is_zero)
    }

    /// CSV with header `n,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value\n");
        for (n, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{n},{v}\n"));
        }
        out
    }
}

/// `(Tf)(n) = q f(n-1) + f(n+1)` and `(Tf)(0) = (q+1) f(1)`; one entry shorter than `f`.
pub fn ray_adjacency_apply<V: Value>(q: u32, f: &RayFunction<V>) -> Result<RayFunction<V>> {
    if f.len() < 2 {
        return Err(Error::TruncationTooSmall("ray function needs at least two values".into()));
    }
    let qq = int(q as i64);
    let mut out = Vec::with_capacity(f.len() - 1);
    out.push(f.values[1].scale(&int(q as i64 + 1)));
    for n in 1..f.len() - 1 {
        let mut v = f.values[n - 1].scale(&qq);
        v.add_assign_ref(&f.values[n + 1]);
        out.push(v);
    }
    Ok(RayFunction::new(out))
}

/// `f - C0(f)` pointwise, with the constant-term profile supplied.
pub fn truncate_ray<V: Value>(f: &RayFunction<V>, profile: &RayFunction<V>) -> Result<RayFunction<V>> {
    if f.len() != profile.len() {
        return Err(Error::Dimension(format!("function has {} values, profile has {}", f.len(), profile.len())));
    }
    Ok(RayFunction::new(f.values.iter().zip(&profile.values).map(|(a, b)| a.sub(b)).collect()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedNorm {
    /// `sum_n f(n)^2 q^{-(1+2l)n}` over the truncation.
    pub partial_sum: BigRational,
    /// Ratio of the last two summands.
    pub tail_ratio: BigRational,
    pub divergent: bool,
    /// Partial sum plus the geometric tail; `None` when divergent.
    pub estimate: Option<BigRational>,
}

/// Squared weighted L2 norm on the ray. `ell` must be a half-integer so the
/// weight stays rational.
pub fn weighted_l2_norm(q: u32, f: &RayFunction<BigRational>, ell: &BigRational) -> Result<WeightedNorm> {
    let e = ell * int(2) + int(1);
    if !e.is_integer() {
        return Err(Error::InvalidParameter(format!("2*ell must be an integer, got ell = {ell}")));
    }
    if f.len() < 2 {
        return Err(Error::TruncationTooSmall("need at least two ray values".into()));
    }
    let e = e.to_integer();
    let base = int(q as i64);
    let weight_step = if e >= BigInt::zero() {
        num_traits::pow(base.recip(), usize::try_from(&e).expect("weight exponent"))
    } else {
        num_traits::pow(base, usize::try_from(&(-e)).expect("weight exponent"))
    };
    let mut weight = BigRational::one();
    let mut terms = Vec::with_capacity(f.len());
    for v in &f.values {
        terms.push(v * v * &weight);
        weight *= &weight_step;
    }
    let partial_sum = terms.iter().fold(<BigRational as Zero>::zero(), |a, t| a + t);
    let last = &terms[terms.len() - 1];
    let prev = &terms[terms.len() - 2];
    let tail_ratio = if Zero::is_zero(prev) { <BigRational as Zero>::zero() } else { last / prev };
    let divergent = tail_ratio >= BigRational::one();
    let estimate = (!divergent).then(|| &partial_sum + last * &tail_ratio / (BigRational::one() - &tail_ratio));
    Ok(WeightedNorm { partial_sum, tail_ratio: tail_ratio.abs(), divergent, estimate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::build_tree;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn constant_one_goes_to_degree() {
        let t = build_tree(3, 3, 1).unwrap();
        let one = VertexFunction::from_fn(&t, 3, |_| r(1, 1));
        let tf = adjacency_apply(&t, &one).unwrap();
        assert!(tf.values.iter().all(|v| *v == r(4, 1)));
    }

    #[test]
    fn psi_is_eigenfunction() {
        for i in 1..=2 {
            let t = build_tree(2, 5, i).unwrap();
            assert!(eigen_exceptions(&t).is_empty());
            let p = psi(&t);
            let tp = adjacency_apply(&t, &p).unwrap();
            let lam = lambda(2);
            for (x, v) in tp.values.iter().enumerate() {
                assert_eq!(*v, &lam * p.get(x));
            }
        }
    }

    #[test]
    fn psi_values() {
        let t = build_tree(2, 3, 1).unwrap();
        let p = psi(&t);
        assert!(p.get(0).is_one());
        assert_eq!(*p.get(t.p2()), LaurentPoly::z_pow(-1));
        let up = t.up_neighbors(0)[0];
        assert_eq!(*p.get(up), LaurentPoly::z());
    }

    #[test]
    fn indicator_spreads_to_neighbors() {
        let t = build_tree(2, 3, 1).unwrap();
        let f = VertexFunction::indicator(&t, 3, 1, r(1, 1));
        let tf = adjacency_apply(&t, &f).unwrap();
        let nbrs: Vec<usize> = t.neighbors(1).collect();
        for (x, v) in tf.values.iter().enumerate() {
            assert_eq!(*v, if nbrs.contains(&x) { r(1, 1) } else { r(0, 1) });
        }
    }

    #[test]
    fn radial_examples() {
        let t = build_tree(3, 5, 1).unwrap();
        let p = psi(&t);
        let id = radial_apply(&RadialKernel::delta(0), &t, &p).unwrap();
        assert_eq!(id.values, p.values);
        let d2 = radial_apply(&RadialKernel::delta(2), &t, &p).unwrap();
        let ev = LaurentPoly::from_terms([(2, 9), (-2, 1), (0, 2)]);
        assert_eq!(shell_eigenvalue(3, 2), ev);
        for (x, v) in d2.values.iter().enumerate() {
            assert_eq!(*v, &ev * p.get(x));
        }
        assert!(radial_apply(&RadialKernel::delta(6), &t, &p).is_err());
    }

    #[test]
    fn shell_recurrence_matches_brute_sums() {
        let t = build_tree(2, 8, 1).unwrap();
        let p = psi(&t);
        for n in 0..=4 {
            let k = RadialKernel::delta(n);
            let out = radial_apply(&k, &t, &p).unwrap();
            for (x, v) in out.values.iter().enumerate() {
                assert_eq!(*v, &radial_eigenvalue(2, &k) * p.get(x));
            }
        }
    }

    #[test]
    fn constant_term_examples() {
        let t = build_tree(2, 10, 1).unwrap();
        let p = psi(&t);
        for d in 0..4 {
            assert_eq!(constant_term(&t, &p, 2, d).unwrap(), LaurentPoly::z_pow(2));
        }
        let a = t.apartment_vertex(2).unwrap();
        let ind = VertexFunction::indicator(&t, 10, a, r(1, 1));
        assert_eq!(constant_term(&t, &ind, 2, 1).unwrap(), r(1, 2));
    }

    #[test]
    fn ray_adjacency_examples() {
        let one = RayFunction::new(vec![r(1, 1); 6]);
        let out = ray_adjacency_apply(3, &one).unwrap();
        assert!(out.values.iter().all(|v| *v == r(4, 1)));
        let q = 3;
        let lam = lambda(q);
        let f = RayFunction::new((0..8).map(|n| LaurentPoly::z_pow(-n)).collect());
        let g = RayFunction::new((0..8).map(|n| LaurentPoly::monomial(r(3, 1).pow(n as i32), n)).collect());
        for h in [f, g] {
            let th = ray_adjacency_apply(q, &h).unwrap();
            for n in 1..th.len() {
                assert_eq!(th.values[n], &lam * &h.values[n]);
            }
        }
    }

    #[test]
    fn truncation_examples() {
        let f = RayFunction::new(vec![r(1, 2), r(3, 1), r(-1, 1)]);
        assert!(truncate_ray(&f, &f).unwrap().is_zero());
        assert!(truncate_ray(&f, &RayFunction::new(vec![r(0, 1)])).is_err());
    }

    #[test]
    fn weighted_norm_of_constant() {
        let f = RayFunction::new(vec![r(1, 1); 40]);
        let n = weighted_l2_norm(2, &f, &r(0, 1)).unwrap();
        assert!(!n.divergent);
        assert_eq!(n.tail_ratio, r(1, 2));
        assert_eq!(n.estimate.unwrap(), r(2, 1));
        assert!(weighted_l2_norm(2, &f, &r(1, 3)).is_err());
        let grow = RayFunction::new((0..10).map(|k| r(2, 1).pow(k)).collect());
        assert!(weighted_l2_norm(2, &grow, &r(0, 1)).unwrap().divergent);
    }
}
