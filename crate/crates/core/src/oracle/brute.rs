//! Brute-force Eisenstein sums `sum_gamma z0^{H(gamma v)}` over the bottom rows
//! of degree at most `D`, and the checks built on them.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::eisenstein::{eisenstein_ray, eisenstein_ray_scaled, eisenstein_values_at, EisensteinData, Normalization};
use crate::error::{Error, Result};
use crate::exactalg::RationalFunc;
use crate::spectral::{constant_term, VertexFunction};
use crate::tree::{build_tree, horosphere, IwasawaLabel};

use super::cosets::{coset_rows, coset_rows_of_degree, phi_sum, stratum_count};
use super::fq::{check_prime, complete_to_sl2, FqPoly, Matrix2};
use super::lattice::{act, default_precision, lattice_ball, lattice_images, LatticeVertex};

/// Relative size of the last increment that counts as stable to four
/// significant digits.
pub const CAUCHY_TOL: f64 = 0.5e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Every bottom row, one at a time.
    Explicit,
    /// Whole degree strata at once; only for vertices `sigma_n`.
    Stratified,
}

/// Partial sums through degree `0..=D`.
#[derive(Clone, Debug)]
pub struct BruteSum {
    pub q: u32,
    pub z0: BigRational,
    pub partials: Vec<BigRational>,
}

impl BruteSum {
    pub fn degree(&self) -> usize {
        self.partials.len() - 1
    }

    pub fn value(&self) -> &BigRational {
        self.partials.last().expect("at least degree 0")
    }

    pub fn increments(&self) -> Vec<BigRational> {
        self.partials.windows(2).map(|w| &w[1] - &w[0]).collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.increments().iter().all(|d| !d.is_negative())
    }

    /// The larger of the last two increment ratios. One ratio alone is too
    /// optimistic right after the increments peak.
    pub fn tail_ratio(&self) -> Option<f64> {
        let inc = self.increments();
        let ratio = |a: &BigRational, b: &BigRational| if a.is_zero() { None } else { (b / a).to_f64() };
        match inc.as_slice() {
            [.., a, b, c] => Some(ratio(a, b)?.max(ratio(b, c)?)),
            [a, b] => ratio(a, b),
            _ => None,
        }
    }

    /// Geometric estimate `last r / (1 - r)` of what the missing degrees add;
    /// infinite when the ratio is not below 1.
    pub fn tail_bound(&self) -> f64 {
        let inc = self.increments();
        let Some(last) = inc.last() else { return f64::INFINITY };
        if last.is_zero() {
            return 0.0;
        }
        match self.tail_ratio() {
            Some(r) if r < 1.0 => last.to_f64().unwrap_or(f64::INFINITY) * r / (1.0 - r),
            _ => f64::INFINITY,
        }
    }

    pub fn relative_increment(&self) -> f64 {
        let inc = self.increments();
        match inc.last() {
            Some(last) => (last / self.value()).to_f64().unwrap_or(f64::INFINITY).abs(),
            None => f64::INFINITY,
        }
    }

    /// Monotone, geometric tail ratio below 1 and last relative increment below `tol`.
    pub fn is_cauchy(&self, tol: f64) -> bool {
        self.is_monotone() && self.tail_ratio().is_some_and(|r| r < 1.0) && self.relative_increment() < tol
    }

    /// Smallest degree at which the truncated sum already passes `is_cauchy`.
    pub fn stable_degree(&self, tol: f64) -> Option<usize> {
        (2..=self.degree()).find(|&d| {
            BruteSum { q: self.q, z0: self.z0.clone(), partials: self.partials[..=d].to_vec() }.is_cauchy(tol)
        })
    }
}

fn deg(x: &FqPoly) -> i64 {
    x.degree().map_or(i64::MIN / 4, |d| d as i64)
}

fn check_z0(q: u32, z0: &BigRational) -> Result<()> {
    if !z0.is_positive() {
        return Err(Error::InvalidParameter(format!("z0 must be positive, got {z0}")));
    }
    let _ = q;
    Ok(())
}

struct Powers {
    z0: BigRational,
    cache: HashMap<i64, BigRational>,
}

impl Powers {
    fn new(z0: &BigRational) -> Self {
        Powers { z0: z0.clone(), cache: HashMap::new() }
    }

    fn get(&mut self, h: i64) -> &BigRational {
        let z0 = &self.z0;
        self.cache.entry(h).or_insert_with(|| {
            let base = if h < 0 { z0.recip() } else { z0.clone() };
            num_traits::pow(base, h.unsigned_abs() as usize)
        })
    }
}

/// Height of the class of `gamma g` from the bottom row `(c, d)` of `gamma`.
pub fn row_height(row: &(FqPoly, FqPoly), g: &Matrix2, deg_det: i64) -> i64 {
    let (c, d) = row;
    let lo = c.mul(&g.a).add(&d.mul(&g.c));
    let hi = c.mul(&g.b).add(&d.mul(&g.d));
    -deg_det + 2 * deg(&lo).max(deg(&hi))
}

/// `sum z0^{H(gamma v)}` over bottom rows of degree `<= d_max`.
pub fn brute_eisenstein(q: u32, v: &LatticeVertex, z0: &BigRational, d_max: usize, method: Method) -> Result<BruteSum> {
    check_prime(q)?;
    check_z0(q, z0)?;
    match method {
        Method::Explicit => brute_explicit(q, v, z0, d_max),
        Method::Stratified => {
            if !v.e.is_empty() {
                return Err(Error::InvalidParameter("the stratified sum needs a vertex sigma_n".into()));
            }
            brute_stratified(q, -v.k, z0, d_max)
        }
    }
}

fn brute_explicit(q: u32, v: &LatticeVertex, z0: &BigRational, d_max: usize) -> Result<BruteSum> {
    Ok(brute_explicit_many(q, std::slice::from_ref(v), z0, d_max)?.pop().expect("one vertex"))
}

/// Explicit sums at several vertices, enumerating the rows once.
pub fn brute_explicit_many(q: u32, vs: &[LatticeVertex], z0: &BigRational, d_max: usize) -> Result<Vec<BruteSum>> {
    check_prime(q)?;
    check_z0(q, z0)?;
    let mats: Vec<(Matrix2, i64)> = vs
        .iter()
        .map(|v| {
            let g = v.matrix(q);
            let dd = deg(&g.det());
            (g, dd)
        })
        .collect();
    let mut pw = Powers::new(z0);
    let mut acc = vec![BigRational::zero(); vs.len()];
    let mut partials = vec![Vec::with_capacity(d_max + 1); vs.len()];
    for d in 0..=d_max {
        let rows = coset_rows_of_degree(q, d)?;
        for (i, (g, dd)) in mats.iter().enumerate() {
            for row in &rows {
                acc[i] += pw.get(row_height(row, g, *dd));
            }
            partials[i].push(acc[i].clone());
        }
    }
    Ok(partials.into_iter().map(|p| BruteSum { q, z0: z0.clone(), partials: p }).collect())
}

/// At `sigma_n` a row with `deg c = a`, `deg d = b` has height
/// `-n + 2 max(a + n, b)`, so each stratum contributes its size times one power.
fn brute_stratified(q: u32, n: i64, z0: &BigRational, d_max: usize) -> Result<BruteSum> {
    Ok(brute_stratified_with(q, n, z0, &phi_table(q, d_max)?))
}

/// `S(0..=d_max)`.
pub fn phi_table(q: u32, d_max: usize) -> Result<Vec<BigInt>> {
    (0..=d_max).map(|a| phi_sum(q, a)).collect()
}

fn brute_stratified_with(q: u32, n: i64, z0: &BigRational, phi: &[BigInt]) -> BruteSum {
    let d_max = phi.len() - 1;
    let mut pw = Powers::new(z0);
    // (0, 1) and (1, 0)
    let mut acc = pw.get(-n).clone() + pw.get(n);
    let mut partials = Vec::with_capacity(d_max + 1);
    for d in 0..=d_max {
        for a in 0..=d {
            for b in 0..=d {
                if a.max(b) != d {
                    continue;
                }
                let h = -n + 2 * (a as i64 + n).max(b as i64);
                let count = BigRational::from_integer(stratum_count(q, a, b, phi));
                acc += count * pw.get(h);
            }
        }
        partials.push(acc.clone());
    }
    BruteSum { q, z0: z0.clone(), partials }
}

/// Fixed-point decimal with `places` digits after the point, rounded half up.
pub fn decimal(x: &BigRational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = x * BigRational::from_integer(scale.clone());
    let rounded = (scaled + BigRational::new(1.into(), 2.into())).floor().to_integer();
    let neg = rounded.is_negative();
    let digits = rounded.abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = digits.split_at(digits.len() - places);
    let sign = if neg { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

fn sci(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.3e}")
    } else {
        "inf".into()
    }
}

#[derive(Clone, Debug)]
pub struct CompareRow {
    pub n: u32,
    pub brute: BruteSum,
    pub ray: BigRational,
    pub ratio: BigRational,
}

/// Brute sums at `sigma_0..=sigma_n_max` against the `c1 = 1` ray model.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub q: u32,
    pub z0: BigRational,
    pub degree: usize,
    pub rows: Vec<CompareRow>,
}

impl Comparison {
    /// `max |ratio_n / ratio_0 - 1|`.
    pub fn max_deviation(&self) -> f64 {
        let r0 = &self.rows[0].ratio;
        self.rows
            .iter()
            .map(|r| (&r.ratio / r0 - BigRational::one()).abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("vertex,brute,ray_model,ratio,tail_bound\n");
        for r in &self.rows {
            out.push_str(&format!(
                "sigma_{},{},{},{},{}\n",
                r.n,
                decimal(r.brute.value(), 12),
                decimal(&r.ray, 12),
                decimal(&r.ratio, 12),
                sci(r.brute.tail_bound())
            ));
        }
        out
    }
}

pub fn compare(q: u32, z0: &BigRational, d_max: usize, n_max: u32) -> Result<Comparison> {
    let data = eisenstein_ray(q)?;
    let ray = eisenstein_values_at(&data, n_max, z0)?;
    check_prime(q)?;
    check_z0(q, z0)?;
    let phi = phi_table(q, d_max)?;
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let brute = brute_stratified_with(q, n as i64, z0, &phi);
        let ray_n = ray.values[n as usize].clone();
        if ray_n.is_zero() {
            return Err(Error::Pole(format!("ray model vanishes at sigma_{n}")));
        }
        let ratio = brute.value() / &ray_n;
        rows.push(CompareRow { n, brute, ray: ray_n, ratio });
    }
    Ok(Comparison { q, z0: z0.clone(), degree: d_max, rows })
}

/// The common scale `brute / ray` at `sigma_0`: the oracle's `c1` at `z0`.
pub fn measured_c1(q: u32, z0: &BigRational, d_max: usize) -> Result<BigRational> {
    Ok(compare(q, z0, d_max, 0)?.rows[0].ratio.clone())
}

/// Ray data whose `c1` is the measured scale rounded to `places` decimals.
pub fn oracle_scaled(q: u32, z0: &BigRational, d_max: usize, places: usize) -> Result<EisensteinData> {
    let c1 = measured_c1(q, z0, d_max)?;
    let scale = BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
    let rounded = (&c1 * &scale).round() / scale;
    eisenstein_ray_scaled(q, RationalFunc::from_rational(rounded), Normalization::OracleScaled)
}

/// `-min_gamma H(gamma v)` over rows of degree `<= d_max`: the index of the
/// ray vertex `sigma_n` in the orbit of `v`.
pub fn ray_index(q: u32, v: &LatticeVertex, d_max: usize) -> Result<i64> {
    let g = v.matrix(q);
    let deg_det = deg(&g.det());
    let rows = coset_rows(q, d_max)?;
    Ok(-rows.iter().map(|row| row_height(row, &g, deg_det)).min().expect("rows are nonempty"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayQuotient {
    pub classes: usize,
    /// Row `n`: neighbors of `sigma_n` in the class of `sigma_{n-1}` (absent
    /// for `n = 0`) and of `sigma_{n+1}`.
    pub multiplicities: Vec<Vec<u32>>,
    pub indices_consistent: bool,
    pub ok: bool,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Identifies vertices of the radius-`r` lattice ball that are moved onto each
/// other by SL2(F_q), by unipotents of degree `<= d_max` and by the torus.
/// Errors when the identification leaves more than `r + 1` classes.
pub fn quotient_ray_check(q: u32, r: u32, d_max: usize) -> Result<RayQuotient> {
    quotient_ray_check_with(q, r, d_max, default_precision(d_max, r as usize))
}

/// Same, with an explicit Laurent precision for the reductions.
pub fn quotient_ray_check_with(q: u32, r: u32, d_max: usize, prec: usize) -> Result<RayQuotient> {
    check_prime(q)?;
    let ball = lattice_ball(q, r);
    let index: HashMap<&LatticeVertex, usize> = ball.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut gens: Vec<Matrix2> =
        coset_rows_of_degree(q, 0)?.iter().map(|(c, d)| complete_to_sl2(c, d)).collect::<Result<_>>()?;
    for d in 0..=d_max {
        gens.extend(FqPoly::all_of_degree(q, Some(d)).into_iter().map(Matrix2::unipotent));
    }
    gens.extend((1..q).map(|u| Matrix2::torus(q, u)));
    let mut uf = UnionFind((0..ball.len()).collect());
    for (i, v) in ball.iter().enumerate() {
        for g in &gens {
            let w = act(g, v, prec)?;
            if let Some(&j) = index.get(&w) {
                uf.union(i, j);
            }
        }
    }
    let roots: Vec<usize> = (0..ball.len()).map(|i| uf.find(i)).collect();
    let mut distinct = roots.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let classes = distinct.len();
    if classes > r as usize + 1 {
        return Err(Error::InsufficientDegree(format!(
            "{classes} classes remain on the radius-{r} ball with unipotent degree {d_max}"
        )));
    }
    let sigma_class: Vec<usize> = (0..=r as i64).map(|n| roots[index[&LatticeVertex::sigma(n)]]).collect();
    let mut sorted = sigma_class.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let separated = sorted.len() == sigma_class.len();

    let mut multiplicities = Vec::new();
    let mut pattern_ok = true;
    for n in 0..r as usize {
        let sigma = LatticeVertex::sigma(n as i64);
        let mut toward_prev = 0u32;
        let mut toward_next = 0u32;
        for w in sigma.neighbors(q) {
            let cls = roots[index[&w]];
            if cls == sigma_class[n + 1] {
                toward_next += 1;
            } else if n > 0 && cls == sigma_class[n - 1] {
                toward_prev += 1;
            }
        }
        let row = if n == 0 { vec![toward_next] } else { vec![toward_prev, toward_next] };
        let expected = if n == 0 { vec![q + 1] } else { vec![q, 1] };
        pattern_ok &= row == expected;
        multiplicities.push(row);
    }

    // every class carries a single ray index, and sigma_n's class carries n
    let mut class_index: HashMap<usize, i64> = HashMap::new();
    let mut indices_consistent = true;
    for (i, v) in ball.iter().enumerate() {
        let n = ray_index(q, v, r as usize)?;
        match class_index.insert(roots[i], n) {
            Some(prev) if prev != n => indices_consistent = false,
            _ => {}
        }
    }
    for (n, c) in sigma_class.iter().enumerate() {
        indices_consistent &= class_index.get(c) == Some(&(n as i64));
    }

    Ok(RayQuotient {
        classes,
        multiplicities,
        indices_consistent,
        ok: classes == r as usize + 1 && separated && pattern_ok && indices_consistent,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitBound {
    /// Minimum label `n` over rows of degree `<= D`, for each `D` examined.
    pub minima: Vec<i64>,
    pub stabilized_at: Option<usize>,
}

impl OrbitBound {
    pub fn minimum(&self) -> i64 {
        *self.minima.last().expect("nonempty")
    }
}

/// Running minimum of the `i = 1` label `n(gamma v)` for `D = 0..=d_max`,
/// continued three degrees past the point where it settles.
pub fn orbit_height_bound(q: u32, v: &LatticeVertex, d_max: usize) -> Result<OrbitBound> {
    check_prime(q)?;
    let g = v.matrix(q);
    let deg_det = deg(&g.det());
    let mut minima: Vec<i64> = Vec::new();
    let mut current = i64::MAX;
    let mut d = 0;
    loop {
        for row in coset_rows_of_degree(q, d)? {
            let h = row_height(&row, &g, deg_det);
            current = current.min(IwasawaLabel::from_height(1, h).n);
        }
        minima.push(current);
        let settled = minima.iter().position(|&m| m == current).expect("current is present");
        if d >= d_max && d >= settled + 3 {
            let stabilized_at = (settled <= d_max).then_some(settled);
            return Ok(OrbitBound { minima, stabilized_at });
        }
        d += 1;
    }
}

#[derive(Clone, Debug)]
pub struct ConstantTermRow {
    pub n: u32,
    pub depth: u32,
    pub value: BigRational,
    pub ray: BigRational,
    pub tolerance: f64,
}

impl ConstantTermRow {
    pub fn ok(&self) -> bool {
        (&self.value - &self.ray).abs().to_f64().unwrap_or(f64::INFINITY) <= self.tolerance
    }
}

/// Lifts the explicit brute sum to the `i = 1` tree of radius `radius`, takes
/// horospherical averages at levels `-n` and compares them with the ray model
/// scaled by `c1` measured on the ray four degrees deeper. Tolerance is the
/// largest tail bound over the horosphere. The lift is only evaluated on
/// horosphere members, the one place the average reads it.
pub fn constant_term_cross_check(q: u32, z0: &BigRational, radius: u32, d_max: usize) -> Result<Vec<ConstantTermRow>> {
    let tree = build_tree(q, radius, 1)?;
    let imgs = lattice_images(&tree);
    let n_max = radius.saturating_sub(2);
    let mut spheres = Vec::new();
    for n in 0..=n_max {
        let mut depth = 1;
        while n + 2 * depth <= radius {
            spheres.push((n, depth, horosphere(&tree, -(n as i64), depth)?));
            depth += 1;
        }
    }
    let mut members: Vec<usize> = spheres.iter().flat_map(|(_, _, h)| h.members.iter().copied()).collect();
    members.sort_unstable();
    members.dedup();
    let verts: Vec<LatticeVertex> = members.iter().map(|&m| imgs[m].clone()).collect();
    let sums: HashMap<usize, BruteSum> = members.into_iter().zip(brute_explicit_many(q, &verts, z0, d_max)?).collect();
    let f = VertexFunction::from_fn(&tree, radius, |id| {
        sums.get(&id).map_or_else(BigRational::zero, |s| s.value().clone())
    });
    let c1 = measured_c1(q, z0, d_max + 4)?;
    let ray = eisenstein_values_at(&eisenstein_ray(q)?, n_max, z0)?;
    let mut rows = Vec::new();
    for (n, depth, h) in &spheres {
        let tolerance = h.members.iter().map(|m| sums[m].tail_bound()).fold(0.0, f64::max);
        let value = constant_term(&tree, &f, -(*n as i64), *depth)?;
        rows.push(ConstantTermRow { n: *n, depth: *depth, value, ray: &ray.values[*n as usize] * &c1, tolerance });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_rational;

    fn r(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn explicit_and_stratified_agree() {
        for (q, d) in [(2, 6), (3, 3)] {
            for n in 0..4 {
                let v = LatticeVertex::sigma(n);
                let a = brute_eisenstein(q, &v, &r("1/5"), d, Method::Explicit).unwrap();
                let b = brute_eisenstein(q, &v, &r("1/5"), d, Method::Stratified).unwrap();
                assert_eq!(a.partials, b.partials);
            }
        }
    }

    #[test]
    fn row_heights_match_lattice_reduction() {
        let q = 2;
        let v = LatticeVertex::sigma(2).up(1).up(0);
        let g = v.matrix(q);
        let dd = deg(&g.det());
        for row in coset_rows(q, 3).unwrap() {
            let gamma = complete_to_sl2(&row.0, &row.1).unwrap();
            let w = act(&gamma, &v, 40).unwrap();
            assert_eq!(row_height(&row, &g, dd), w.height());
        }
    }

    #[test]
    fn convergent_and_divergent_regions() {
        let v = LatticeVertex::base();
        let good = brute_eisenstein(2, &v, &r("1/4"), 14, Method::Stratified).unwrap();
        assert!(good.is_monotone());
        assert!(good.is_cauchy(CAUCHY_TOL));
        assert!(good.stable_degree(CAUCHY_TOL).unwrap() <= 14);
        let bad = brute_eisenstein(2, &v, &r("1/2"), 14, Method::Stratified).unwrap();
        assert!(bad.is_monotone());
        assert!(!bad.is_cauchy(CAUCHY_TOL));
    }

    #[test]
    fn ratio_is_common_scale() {
        let cmp = compare(2, &r("1/4"), 14, 5).unwrap();
        assert!(cmp.max_deviation() < 1e-3);
        let c1 = cmp.rows[0].ratio.to_f64().unwrap();
        assert!((c1 - 1.0).abs() < 1e-6);
        let csv = cmp.to_csv();
        assert!(csv.starts_with("vertex,brute,ray_model,ratio,tail_bound\n"));
        assert_eq!(csv.lines().count(), 7);
    }

    #[test]
    fn oracle_scaled_rounds_to_unit() {
        let data = oracle_scaled(2, &r("1/4"), 12, 6).unwrap();
        assert!(data.c1.is_one());
        assert_eq!(data.normalization, Normalization::OracleScaled);
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(decimal(&r("133/8"), 3), "16.625");
        assert_eq!(decimal(&r("1/3"), 4), "0.3333");
        assert_eq!(decimal(&r("-2/3"), 2), "-0.67");
        assert_eq!(decimal(&r("5"), 0), "5");
    }

    #[test]
    fn quotient_ray_small() {
        let one = quotient_ray_check(2, 1, 0).unwrap();
        assert!(one.ok);
        assert_eq!(one.multiplicities, vec![vec![3]]);
        let four = quotient_ray_check(2, 4, 4).unwrap();
        assert!(four.ok, "{four:?}");
        assert_eq!(four.classes, 5);
        assert_eq!(four.multiplicities, vec![vec![3], vec![2, 1], vec![2, 1], vec![2, 1]]);
    }

    #[test]
    fn quotient_ray_flags_small_degree() {
        assert!(matches!(quotient_ray_check(2, 4, 0), Err(Error::InsufficientDegree(_))));
    }

    #[test]
    fn orbit_bound_at_base() {
        let b = orbit_height_bound(2, &LatticeVertex::base(), 8).unwrap();
        assert_eq!(b.minima[0], 0);
        assert!(b.stabilized_at.is_some_and(|d| d <= 8));
        assert!(b.minima.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn ray_index_is_invariant() {
        let q = 2;
        let v = LatticeVertex::sigma(3).up(1);
        let n = ray_index(q, &v, 6).unwrap();
        for gamma in crate::oracle::cosets::enumerate_cosets(q, 2).unwrap() {
            let w = act(&gamma, &v, 40).unwrap();
            assert_eq!(ray_index(q, &w, 6).unwrap(), n);
        }
    }

    #[test]
    fn brute_sum_is_gamma_invariant() {
        let q = 2;
        let z0 = r("1/8");
        let v = LatticeVertex::sigma(1);
        let a = brute_eisenstein(q, &v, &z0, 7, Method::Explicit).unwrap();
        for gamma in crate::oracle::cosets::enumerate_cosets(q, 1).unwrap() {
            let w = act(&gamma, &v, 40).unwrap();
            let b = brute_eisenstein(q, &w, &z0, 7, Method::Explicit).unwrap();
            let diff = (a.value() - b.value()).abs().to_f64().unwrap();
            assert!(diff <= a.tail_bound() + b.tail_bound(), "{w:?}: {diff}");
        }
    }

    #[test]
    fn lifted_constant_term_matches_ray() {
        let rows = constant_term_cross_check(2, &r("1/4"), 6, 8).unwrap();
        assert!(!rows.is_empty());
        for row in &rows {
            assert!(
                row.ok(),
                "n={} depth={} value={} ray={} tol={}",
                row.n,
                row.depth,
                row.value,
                row.ray,
                row.tolerance
            );
        }
    }
}
