//! The truncated (q+1)-regular Tits tree around the base vertex `P1`.
//!
//! Vertices are created breadth first. The root `P1` has `q + 1` children:
//! indices `0..q` are the cosets `chi_1(s) w1 P2` and index `q` is `P2`. Every
//! other vertex has `q` children indexed `0..q`, where index 0 continues the
//! standard apartment when the parent lies on it. Raw Bruhat words grow by
//! the type letter of the parent, so they alternate and are stored as
//! (first letter, length).

use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::Range;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::WeylWord;

/// Iwasawa cell `U_i (w_i w_{3-i})^n P_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IwasawaLabel {
    pub i: u8,
    pub n: i64,
    pub j: u8,
}

impl IwasawaLabel {
    pub fn new(i: u8, n: i64, j: u8) -> Self {
        IwasawaLabel { i, n, j }
    }

    /// `2n` on cells of type `i`, `2n - 1` on the other type.
    pub fn height(&self) -> i64 {
        if self.j == self.i {
            2 * self.n
        } else {
            2 * self.n - 1
        }
    }

    /// The unique label of height `h` for the labeling `i`.
    pub fn from_height(i: u8, h: i64) -> Self {
        if h.rem_euclid(2) == 0 {
            IwasawaLabel { i, n: h / 2, j: i }
        } else {
            IwasawaLabel { i, n: (h + 1).div_euclid(2), j: 3 - i }
        }
    }

    /// Labels of the distinguished neighbor and of the `q` other neighbors.
    pub fn neighbor_labels(&self) -> (IwasawaLabel, IwasawaLabel) {
        let IwasawaLabel { i, n, j } = *self;
        if j == i {
            (IwasawaLabel::new(i, n, 3 - i), IwasawaLabel::new(i, n + 1, 3 - i))
        } else {
            (IwasawaLabel::new(i, n - 1, i), IwasawaLabel::new(i, n, i))
        }
    }
}

pub fn neighbor_labels(label: &IwasawaLabel) -> (IwasawaLabel, IwasawaLabel) {
    label.neighbor_labels()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeVertex {
    pub id: usize,
    /// Orbit type: the vertex is a coset of `P_j`.
    pub j: u8,
    pub parent: Option<usize>,
    /// Position among the parent's children (the opaque F_q parameter).
    pub child_index: usize,
    pub depth: u32,
    pub children: Range<usize>,
    pub on_apartment: bool,
    pub label: IwasawaLabel,
    /// Neighbor of height `H - 1`; `None` when it lies outside the ball.
    pub down: Option<usize>,
    word_first: u8,
    word_len: u32,
}

impl TreeVertex {
    pub fn height(&self) -> i64 {
        self.label.height()
    }

    /// The alternating word `w` with the vertex equal to `u w P_j`, minimal in `W / W_j`.
    pub fn raw_word(&self) -> WeylWord {
        WeylWord::alternating(self.word_first, self.word_len as usize)
    }

    /// The even-length representative `w'` with the vertex equal to `u w' P_j`.
    pub fn bruhat_word(&self) -> WeylWord {
        let len = self.word_len as usize;
        if len % 2 == 1 {
            WeylWord::alternating(self.word_first, len + 1)
        } else {
            self.raw_word()
        }
    }
}

#[derive(Clone, Debug)]
pub struct Tree {
    q: u32,
    radius: u32,
    i: u8,
    vertices: Vec<TreeVertex>,
}

pub fn build_tree(q: u32, radius: u32, i: u8) -> Result<Tree> {
    build_tree_ordered(q, radius, i, |_, count| (0..count).collect())
}

/// Like [`build_tree`], but `order(parent_id, count)` decides the order in
/// which child indices receive ids. Labels must not depend on it.
pub fn build_tree_ordered<F>(q: u32, radius: u32, i: u8, mut order: F) -> Result<Tree>
where
    F: FnMut(usize, usize) -> Vec<usize>,
{
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q must be at least 2, got {q}")));
    }
    if radius < 1 {
        return Err(Error::InvalidParameter("radius must be at least 1".into()));
    }
    if i != 1 && i != 2 {
        return Err(Error::InvalidParameter(format!("labeling i must be 1 or 2, got {i}")));
    }
    let qs = q as usize;
    let mut vs = vec![TreeVertex {
        id: 0,
        j: 1,
        parent: None,
        child_index: 0,
        depth: 0,
        children: 0..0,
        on_apartment: true,
        label: IwasawaLabel::new(i, 0, 1),
        down: None,
        word_first: 1,
        word_len: 0,
    }];
    // on_ray[v]: v lies on the half-apartment the down pointers run along
    let mut on_ray = vec![true];
    let mut head = 0;
    while head < vs.len() {
        let v = vs[head].clone();
        head += 1;
        if v.depth == radius {
            continue;
        }
        let is_root = v.parent.is_none();
        let count = if is_root { qs + 1 } else { qs };
        let perm = order(v.id, count);
        assert_eq!(perm.len(), count, "child order must permute the child indices");
        let start = vs.len();
        for s in perm {
            let id = vs.len();
            let (word_first, word_len) = if is_root && s == qs {
                (2, 0)
            } else if v.word_len == 0 {
                (v.j, 1)
            } else {
                (v.word_first, v.word_len + 1)
            };
            let (apartment, ray) = if is_root {
                (s == 0 || s == qs, if i == 1 { s == qs } else { s == 0 })
            } else {
                (v.on_apartment && s == 0, on_ray[v.id] && s == 0)
            };
            vs.push(TreeVertex {
                id,
                j: 3 - v.j,
                parent: Some(v.id),
                child_index: s,
                depth: v.depth + 1,
                children: 0..0,
                on_apartment: apartment,
                label: v.label,
                down: None,
                word_first,
                word_len,
            });
            on_ray.push(ray);
        }
        vs[v.id].children = start..vs.len();
    }
    // down pointers, then labels from the root outward
    for id in 0..vs.len() {
        vs[id].down = if on_ray[id] { vs[id].children.clone().find(|&c| on_ray[c]) } else { vs[id].parent };
    }
    for id in 1..vs.len() {
        let p = vs[id].parent.unwrap();
        let (down, up) = vs[p].label.neighbor_labels();
        vs[id].label = if vs[p].down == Some(id) { down } else { up };
    }
    Ok(Tree { q, radius, i, vertices: vs })
}

impl Tree {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn labeling(&self) -> u8 {
        self.i
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, id: usize) -> &TreeVertex {
        &self.vertices[id]
    }

    pub fn vertices(&self) -> &[TreeVertex] {
        &self.vertices
    }

    pub fn height(&self, id: usize) -> i64 {
        self.vertices[id].height()
    }

    /// Vertices strictly inside the ball have all `q + 1` neighbors present.
    pub fn is_interior(&self, id: usize) -> bool {
        self.vertices[id].depth < self.radius
    }

    /// Number of vertices at distance at most `r` from the root; they occupy
    /// ids `0..ball_len(r)`.
    pub fn ball_len(&self, r: u32) -> usize {
        self.vertices.partition_point(|v| v.depth <= r)
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.radius as usize + 1];
        for v in &self.vertices {
            out[v.depth as usize] += 1;
        }
        out
    }

    pub fn neighbors(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        let v = &self.vertices[id];
        v.parent.into_iter().chain(v.children.clone())
    }

    pub fn up_neighbors(&self, id: usize) -> Vec<usize> {
        let down = self.vertices[id].down;
        self.neighbors(id).filter(|&u| Some(u) != down).collect()
    }

    pub fn p2(&self) -> usize {
        self.vertices[0].children.clone().find(|&c| self.vertices[c].child_index == self.q as usize).unwrap()
    }

    /// The apartment vertex of height `k`, if inside the ball.
    pub fn apartment_vertex(&self, k: i64) -> Option<usize> {
        self.vertices.iter().find(|v| v.on_apartment && v.height() == k).map(|v| v.id)
    }

    pub fn dist_to_apartment(&self, id: usize) -> u32 {
        let mut d = 0;
        let mut v = &self.vertices[id];
        while !v.on_apartment {
            v = &self.vertices[v.parent.unwrap()];
            d += 1;
        }
        d
    }

    /// Child indices along the path from the root; identifies a vertex
    /// independently of id assignment.
    pub fn path(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut v = &self.vertices[id];
        while let Some(p) = v.parent {
            out.push(v.child_index);
            v = &self.vertices[p];
        }
        out.reverse();
        out
    }

    /// One JSON record per line: `{id, j, word, i, n, H, down, up}`.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            let rec = serde_json::json!({
                "id": v.id,
                "j": v.j,
                "word": v.bruhat_word().to_string(),
                "i": v.label.i,
                "n": v.label.n,
                "H": v.height(),
                "down": v.down,
                "up": self.up_neighbors(v.id),
            });
            writeln!(out, "{rec}").unwrap();
        }
        out
    }
}

/// The label read off the Bruhat word alone: `n = |w'|/2` when `w'` is empty or
/// starts with `i`, and `n = -|w'|/2 + d` otherwise, with `d` the distance to
/// the standard apartment (zero exactly on it).
pub fn bruhat_label(tree: &Tree, id: usize) -> IwasawaLabel {
    let v = tree.vertex(id);
    let w = v.bruhat_word();
    let k = (w.len() / 2) as i64;
    let n = match w.first() {
        Some(f) if f != tree.i => -k + tree.dist_to_apartment(id) as i64,
        _ => k,
    };
    IwasawaLabel::new(tree.i, n, v.j)
}

/// Ids whose Bruhat word is odd or whose word-derived label differs from the
/// propagated one.
pub fn bruhat_mismatches(tree: &Tree) -> Vec<usize> {
    (0..tree.len())
        .filter(|&id| {
            let v = tree.vertex(id);
            !v.bruhat_word().len().is_multiple_of(2) || bruhat_label(tree, id) != v.label
        })
        .collect()
}

pub fn verify_bruhat_iwasawa(tree: &Tree) -> bool {
    bruhat_mismatches(tree).is_empty()
}

/// Every interior vertex has exactly one neighbor at `H - 1` (its `down`),
/// `q` at `H + 1`, and neighbors alternate in type.
pub fn check_busemann(tree: &Tree) -> bool {
    (0..tree.len()).filter(|&id| tree.is_interior(id)).all(|id| {
        let h = tree.height(id);
        let v = tree.vertex(id);
        let mut lower = 0;
        let mut higher = 0;
        for u in tree.neighbors(id) {
            if tree.vertex(u).j == v.j {
                return false;
            }
            match tree.height(u) - h {
                -1 if Some(u) == v.down => lower += 1,
                1 => higher += 1,
                _ => return false,
            }
        }
        lower == 1 && higher == tree.q() as usize
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Horosphere {
    pub level: i64,
    pub depth: u32,
    pub members: Vec<usize>,
    pub weights: Vec<BigRational>,
}

/// Level-`k` vertices that share the `D`-th down-ancestor of the apartment
/// vertex of height `k`: descend `D` steps, then take every `D`-step ascent.
pub fn horosphere(tree: &Tree, k: i64, depth: u32) -> Result<Horosphere> {
    let start = tree
        .apartment_vertex(k)
        .ok_or_else(|| Error::TruncationTooSmall(format!("no apartment vertex at level {k}")))?;
    let mut base = start;
    for _ in 0..depth {
        base = tree
            .vertex(base)
            .down
            .ok_or_else(|| Error::TruncationTooSmall(format!("descent from level {k} leaves the ball")))?;
    }
    let mut layer = vec![base];
    for step in 0..depth {
        let mut next = Vec::with_capacity(layer.len() * tree.q() as usize);
        for &v in &layer {
            let up = tree.up_neighbors(v);
            if up.len() != tree.q() as usize {
                return Err(Error::TruncationTooSmall(format!(
                    "ascent step {} at vertex {v} reaches the ball boundary",
                    step + 1
                )));
            }
            next.extend(up);
        }
        layer = next;
    }
    layer.sort_unstable();
    let w = BigRational::new(1.into(), layer.len().into());
    Ok(Horosphere { level: k, depth, weights: vec![w; layer.len()], members: layer })
}

/// Label of every vertex keyed by its root path.
pub fn labels_by_path(tree: &Tree) -> HashMap<Vec<usize>, IwasawaLabel> {
    (0..tree.len()).map(|id| (tree.path(id), tree.vertex(id).label)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbor_label_examples() {
        let (d, u) = IwasawaLabel::new(1, 2, 2).neighbor_labels();
        assert_eq!((d, u), (IwasawaLabel::new(1, 1, 1), IwasawaLabel::new(1, 2, 1)));
        let (d, u) = IwasawaLabel::new(1, 2, 1).neighbor_labels();
        assert_eq!((d, u), (IwasawaLabel::new(1, 2, 2), IwasawaLabel::new(1, 3, 2)));
        for i in 1..=2 {
            for h in -7..8 {
                let l = IwasawaLabel::from_height(i, h);
                assert_eq!(l.height(), h);
                let (d, u) = l.neighbor_labels();
                assert_eq!((d.height(), u.height()), (h - 1, h + 1));
            }
        }
    }

    #[test]
    fn sphere_sizes_and_counts() {
        let t = build_tree(2, 3, 1).unwrap();
        assert_eq!(t.len(), 22);
        assert_eq!(t.sphere_sizes(), vec![1, 3, 6, 12]);
        let t = build_tree(3, 4, 2).unwrap();
        for r in 1..=4u32 {
            assert_eq!(t.sphere_sizes()[r as usize], 4 * 3usize.pow(r - 1));
        }
        assert!(build_tree(1, 3, 1).is_err());
    }

    #[test]
    fn base_edge_and_ray_heights() {
        let t = build_tree(2, 4, 1).unwrap();
        let p2 = t.p2();
        assert_eq!(t.vertex(0).label, IwasawaLabel::new(1, 0, 1));
        assert_eq!(t.vertex(p2).label, IwasawaLabel::new(1, 0, 2));
        assert_eq!(t.height(0), 0);
        assert_eq!(t.height(p2), -1);
        let s2 = t.vertex(p2).down.unwrap();
        let s3 = t.vertex(s2).down.unwrap();
        assert_eq!(t.height(s2), -2);
        assert_eq!(t.height(s3), -3);
        assert_eq!(t.vertex(s3).bruhat_word().to_string(), "21");
        assert_eq!(t.vertex(s3).label.n, -1);
        let t2 = build_tree(2, 4, 2).unwrap();
        assert_eq!(t2.vertex(0).label, IwasawaLabel::new(2, 0, 1));
        assert_eq!(t2.vertex(t2.p2()).label, IwasawaLabel::new(2, 0, 2));
    }

    #[test]
    fn bruhat_route_agrees() {
        for i in 1..=2 {
            let t = build_tree(2, 6, i).unwrap();
            assert!(verify_bruhat_iwasawa(&t));
            assert!(check_busemann(&t));
        }
    }

    #[test]
    fn heights_sum_constant_on_apartment() {
        let t1 = build_tree(3, 5, 1).unwrap();
        let t2 = build_tree(3, 5, 2).unwrap();
        for id in 0..t1.len() {
            if t1.vertex(id).on_apartment {
                assert_eq!(t1.height(id) + t2.height(id), -1);
            }
        }
    }

    #[test]
    fn horosphere_basics() {
        let t = build_tree(2, 10, 1).unwrap();
        let h0 = horosphere(&t, 1, 0).unwrap();
        assert_eq!(h0.members, vec![t.apartment_vertex(1).unwrap()]);
        let mut prev = 1;
        for d in 1..5 {
            let h = horosphere(&t, 1, d).unwrap();
            assert_eq!(h.members.len(), prev * 2);
            assert!(h.members.iter().all(|&v| t.height(v) == 1));
            prev = h.members.len();
        }
        assert!(horosphere(&t, 1, 9).is_err());
    }

    #[test]
    fn json_lines_shape() {
        let t = build_tree(2, 1, 1).unwrap();
        let text = t.to_json_lines();
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first["H"], 0);
        assert_eq!(first["up"].as_array().unwrap().len(), 2);
        assert_eq!(text.lines().count(), 4);
    }
}
