//! Vertices of the tree of F_q((1/t))-lattice classes.
//!
//! Every class has a unique representative spanned by the columns of
//! `[[pi^k, e], [0, 1]]` with `pi = 1/t` and `e` taken modulo `pi^k`, i.e. `e`
//! keeps only the powers `t^m` with `m >= 1 - k`. `k` is the height, and the
//! fundamental ray `sigma_n = diag(t^n, 1)` is `(k, e) = (-n, 0)`.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::tree::{IwasawaLabel, Tree};

use super::fq::{FqPoly, Matrix2};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVertex {
    pub k: i64,
    /// Nonzero terms `(exponent of t, coefficient)`, ascending, exponents `>= 1 - k`.
    pub e: Vec<(i64, u32)>,
}

impl LatticeVertex {
    pub fn base() -> Self {
        LatticeVertex { k: 0, e: Vec::new() }
    }

    /// `sigma_n`.
    pub fn sigma(n: i64) -> Self {
        LatticeVertex { k: -n, e: Vec::new() }
    }

    pub fn height(&self) -> i64 {
        self.k
    }

    /// Type 1 on even heights, as in the `i = 1` labeling.
    pub fn j(&self) -> u8 {
        if self.k.rem_euclid(2) == 0 {
            1
        } else {
            2
        }
    }

    pub fn label(&self) -> IwasawaLabel {
        IwasawaLabel::from_height(1, self.k)
    }

    /// `g M_a` with `M_a = [[pi, a], [0, 1]]`: height goes up by one.
    pub fn up(&self, a: u32) -> Self {
        let mut e = self.e.clone();
        if a != 0 {
            e.push((-self.k, a));
            e.sort_unstable();
        }
        LatticeVertex { k: self.k + 1, e }
    }

    /// `g diag(1, pi)`: height goes down by one.
    pub fn down(&self) -> Self {
        let cut = 2 - self.k;
        LatticeVertex { k: self.k - 1, e: self.e.iter().copied().filter(|&(m, _)| m >= cut).collect() }
    }

    pub fn neighbors(&self, q: u32) -> Vec<LatticeVertex> {
        let mut out: Vec<LatticeVertex> = (0..q).map(|a| self.up(a)).collect();
        out.push(self.down());
        out
    }

    /// A polynomial matrix in the class: `t^N [[t^-k, e], [0, 1]]`.
    pub fn matrix(&self, p: u32) -> Matrix2 {
        let low = self.e.first().map_or(0, |&(m, _)| m);
        let n = self.k.max(-low).max(0);
        let mut top = FqPoly::zero(p);
        for &(m, c) in &self.e {
            top = top.add(&FqPoly::monomial(p, c, (m + n) as usize));
        }
        Matrix2::new(
            FqPoly::monomial(p, 1, (n - self.k) as usize),
            top,
            FqPoly::zero(p),
            FqPoly::monomial(p, 1, n as usize),
        )
    }
}

fn deg(x: &FqPoly) -> i64 {
    x.degree().map_or(i64::MIN / 4, |d| d as i64)
}

/// `-deg det g + 2 max(deg c, deg d)`: the height of the class of `g`.
pub fn height_of(g: &Matrix2) -> i64 {
    -deg(&g.det()) + 2 * deg(&g.c).max(deg(&g.d))
}

/// Default Laurent precision for degree bound `d` and radius `r`.
pub fn default_precision(d: usize, r: usize) -> usize {
    2 * (d + r + 4)
}

/// Canonical class of `g`, expanding `e` to at most `precision` Laurent places.
/// The reduction is recomputed with four more places and must agree.
pub fn vertex_of(g: &Matrix2, precision: usize) -> Result<LatticeVertex> {
    let v = reduce(g, precision)?;
    if reduce(g, precision + 4)? != v {
        return Err(Error::InsufficientPrecision { needed: precision + 4, available: precision });
    }
    Ok(v)
}

fn reduce(g: &Matrix2, precision: usize) -> Result<LatticeVertex> {
    let p = g.a.p();
    let det = g.det();
    if det.is_zero() {
        return Err(Error::InvalidParameter("singular matrix has no lattice class".into()));
    }
    // pivot column: the bottom entry of least valuation, i.e. largest degree
    let (y, w) = if deg(&g.d) >= deg(&g.c) { (&g.b, &g.d) } else { (&g.a, &g.c) };
    let dw = deg(w);
    let k = -deg(&det) + 2 * dw;
    let lowest = 1 - k;
    if y.is_zero() || deg(y) - dw < lowest {
        return Ok(LatticeVertex { k, e: Vec::new() });
    }
    let top = deg(y) - dw;
    let needed = (top - lowest + 1) as usize;
    if needed > precision {
        return Err(Error::InsufficientPrecision { needed, available: precision });
    }
    // long division of y by w in descending powers of t, down to t^lowest
    let offset = lowest + dw; // exponent of rem[0]
    let size = (deg(y) - offset + 1) as usize;
    let mut rem = vec![0u32; size];
    // terms below t^offset never reach a quotient place we keep
    for (i, &c) in y.coeffs().iter().enumerate() {
        if i as i64 >= offset {
            rem[(i as i64 - offset) as usize] = c;
        }
    }
    let inv = {
        let lead = w.leading() as u64;
        let (mut b, mut ex, mut acc) = (lead, p as u64 - 2, 1u64);
        while ex > 0 {
            if ex & 1 == 1 {
                acc = acc * b % p as u64;
            }
            b = b * b % p as u64;
            ex >>= 1;
        }
        acc
    };
    let mut e = Vec::new();
    for s in (lowest..=top).rev() {
        let idx = (s + dw - offset) as usize;
        let coef = (rem[idx] as u64 * inv % p as u64) as u32;
        if coef == 0 {
            continue;
        }
        e.push((s, coef));
        for (j, &wc) in w.coeffs().iter().enumerate() {
            let Ok(pos) = usize::try_from(s + j as i64 - offset) else { continue };
            let sub = (wc as u64 * coef as u64 % p as u64) as u32;
            rem[pos] = (rem[pos] + p - sub) % p;
        }
    }
    e.reverse();
    Ok(LatticeVertex { k, e })
}

/// `gamma . v` as a class.
pub fn act(gamma: &Matrix2, v: &LatticeVertex, precision: usize) -> Result<LatticeVertex> {
    let p = gamma.a.p();
    vertex_of(&gamma.mul(&v.matrix(p)), precision)
}

/// Image of each vertex of an `i = 1` labeled tree in the lattice tree, following
/// root paths: root children `s < q` are `M_s`, `P2` is `M_inf`; below that a
/// vertex on the ray sends child 0 down and child `s` to `M_s`, and any other
/// vertex sends child `s` to `M_s`.
pub fn lattice_images(tree: &Tree) -> Vec<LatticeVertex> {
    let q = tree.q();
    let mut out: Vec<LatticeVertex> = Vec::with_capacity(tree.len());
    for id in 0..tree.len() {
        let v = tree.vertex(id);
        let img = match v.parent {
            None => LatticeVertex::base(),
            Some(p) => {
                let pv = tree.vertex(p);
                let parent_img = &out[p];
                let s = v.child_index as u32;
                let parent_on_ray = pv.down.is_some_and(|d| tree.vertex(d).parent == Some(p));
                if pv.parent.is_none() {
                    if s == q {
                        parent_img.down()
                    } else {
                        parent_img.up(s)
                    }
                } else if parent_on_ray && s == 0 {
                    parent_img.down()
                } else {
                    parent_img.up(s)
                }
            }
        };
        out.push(img);
    }
    out
}

/// Checks that the tree-to-lattice map is injective, preserves adjacency and
/// carries the propagated heights. Returns the offending ids.
pub fn label_mismatches(tree: &Tree) -> Result<Vec<usize>> {
    if tree.labeling() != 1 {
        return Err(Error::InvalidParameter("lattice comparison uses the i = 1 labeling".into()));
    }
    let imgs = lattice_images(tree);
    let mut seen: HashMap<&LatticeVertex, usize> = HashMap::new();
    let mut bad = Vec::new();
    for (id, img) in imgs.iter().enumerate() {
        let v = tree.vertex(id);
        let adjacent = v.parent.is_none_or(|p| {
            let pi = &imgs[p];
            img.down() == *pi || pi.down() == *img
        });
        let fresh = seen.insert(img, id).is_none();
        if !adjacent || !fresh || img.label() != v.label || img.j() != v.j {
            bad.push(id);
        }
    }
    Ok(bad)
}

/// Lattice vertices within distance `radius` of the base, breadth first.
pub fn lattice_ball(q: u32, radius: u32) -> Vec<LatticeVertex> {
    let mut seen: HashSet<LatticeVertex> = HashSet::new();
    let mut out = vec![LatticeVertex::base()];
    seen.insert(LatticeVertex::base());
    let mut start = 0;
    for _ in 0..radius {
        let end = out.len();
        for idx in start..end {
            for n in out[idx].neighbors(q) {
                if seen.insert(n.clone()) {
                    out.push(n);
                }
            }
        }
        start = end;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::build_tree;

    fn poly(p: u32, c: &[u32]) -> FqPoly {
        FqPoly::new(p, c.to_vec())
    }

    #[test]
    fn vertex_of_examples() {
        let p = 2;
        let id = Matrix2::identity(p);
        let v = vertex_of(&id, 8).unwrap();
        assert_eq!(v, LatticeVertex::base());
        assert_eq!((v.height(), v.j()), (0, 1));
        let diag = Matrix2::new(poly(p, &[0, 1]), FqPoly::zero(p), FqPoly::zero(p), FqPoly::one(p));
        let s1 = vertex_of(&diag, 8).unwrap();
        assert_eq!(s1, LatticeVertex::sigma(1));
        assert_eq!(s1.height().abs(), 1);
        // unipotent translation of sigma_2 keeps the height
        let u = Matrix2::unipotent(poly(p, &[1, 1, 0, 1]));
        let s2 = LatticeVertex::sigma(2);
        assert_eq!(act(&u, &s2, 16).unwrap().height(), -2);
    }

    #[test]
    fn precision_is_enforced() {
        let p = 3;
        // e = t^6 / (t^7 + 2t^6) expands to six places at height 7
        let g = Matrix2::new(
            FqPoly::one(p),
            poly(p, &[0, 0, 0, 0, 0, 0, 1]),
            FqPoly::zero(p),
            poly(p, &[0, 0, 0, 0, 0, 0, 2, 1]),
        );
        assert!(matches!(vertex_of(&g, 2), Err(Error::InsufficientPrecision { .. })));
        assert!(vertex_of(&g, 20).is_ok());
    }

    #[test]
    fn matrix_round_trip() {
        let q = 3;
        for v in lattice_ball(q, 4) {
            assert_eq!(vertex_of(&v.matrix(q), 32).unwrap(), v);
            assert_eq!(height_of(&v.matrix(q)), v.k);
        }
    }

    #[test]
    fn ball_size() {
        assert_eq!(lattice_ball(2, 3).len(), 22);
        assert_eq!(lattice_ball(3, 2).len(), 1 + 4 + 12);
    }

    #[test]
    fn tree_labels_match_lattice_heights() {
        for q in [2, 3] {
            let t = build_tree(q, 5, 1).unwrap();
            assert!(label_mismatches(&t).unwrap().is_empty());
        }
    }
}
