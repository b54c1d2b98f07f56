use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tits_eisenstein::exactalg::{LaurentPoly, RationalFunc};
use tits_eisenstein::oracle::{brute_eisenstein, LatticeVertex, Method};
use tits_eisenstein::roots::{delta_re_stream, reflect, CartanMatrix, RootVector};
use tits_eisenstein::spectral::{
    adjacency_apply, radial_apply, ray_adjacency_apply, RadialKernel, RayFunction, VertexFunction,
};
use tits_eisenstein::tree::{bruhat_mismatches, build_tree, build_tree_ordered};

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
    (-3i64..3, prop::collection::vec(-4i64..5, 1..4))
        .prop_map(|(lo, cs)| LaurentPoly::from_terms(cs.into_iter().enumerate().map(|(k, c)| (lo + k as i64, c))))
}

fn arb_func() -> impl Strategy<Value = RationalFunc> {
    (arb_poly(), arb_poly())
        .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
        .prop_map(|(n, d)| RationalFunc::new(n, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(a in arb_func(), b in arb_func(), c in arb_func()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.recip().unwrap()).is_one());
        }
    }

    // evaluation at a point is a ring map into Q, checked against plain rationals
    #[test]
    fn evaluation_is_homomorphism(a in arb_func(), b in arb_func(), p in 1i64..40, s in 1i64..40) {
        let z0 = r(p, s + 41);
        let (Ok(x), Ok(y)) = (a.eval(&z0), b.eval(&z0)) else { return Ok(()) };
        prop_assert_eq!((&a + &b).eval(&z0).unwrap(), &x + &y);
        prop_assert_eq!((&a * &b).eval(&z0).unwrap(), &x * &y);
    }

    #[test]
    fn ray_operator_is_linear(
        f in prop::collection::vec(-20i64..20, 3..12),
        g in prop::collection::vec(-20i64..20, 3..12),
        a in -5i64..5,
        b in 1i64..5,
        q in 2u32..6,
    ) {
        let n = f.len().min(g.len());
        let fr = RayFunction::new(f[..n].iter().map(|&x| r(x, 1)).collect());
        let gr = RayFunction::new(g[..n].iter().map(|&x| r(x, 3)).collect());
        let (ca, cb) = (r(a, 1), r(1, b));
        let comb = RayFunction::new((0..n).map(|k| &fr.values[k] * &ca + &gr.values[k] * &cb).collect());
        let lhs = ray_adjacency_apply(q, &comb).unwrap();
        let tf = ray_adjacency_apply(q, &fr).unwrap();
        let tg = ray_adjacency_apply(q, &gr).unwrap();
        for k in 0..lhs.len() {
            prop_assert_eq!(&lhs.values[k], &(&tf.values[k] * &ca + &tg.values[k] * &cb));
        }
        // the endpoint sees q + 1 copies of its only neighbour
        prop_assert_eq!(&tf.values[0], &(&fr.values[1] * r(q as i64 + 1, 1)));
    }
}

#[test]
fn reflections_are_involutions_preserving_the_form() {
    for m in 2..=5u32 {
        let cm = CartanMatrix::new(m).unwrap();
        let form = |v: &RootVector| &v.a * &v.a + &v.b * &v.b - BigInt::from(m) * &v.a * &v.b;
        for a in -50i64..50 {
            for b in -50i64..50 {
                let v = RootVector::new(a, b);
                for i in 1..=2 {
                    let w = reflect(i, &v, &cm);
                    assert_eq!(reflect(i, &w, &cm), v);
                    assert_eq!(form(&w), form(&v));
                }
            }
        }
    }
}

/// Real roots solve `a^2 - m a b + b^2 = 1`; every solution of height at most 50
/// must appear in exactly one of the two streams.
#[test]
fn delta_re_streams_exhaust_real_roots() {
    const H: i64 = 50;
    for m in 2..=5u32 {
        let cm = CartanMatrix::new(m).unwrap();
        let streams = [delta_re_stream(1, H as usize + 2, &cm), delta_re_stream(2, H as usize + 2, &cm)];
        let mut seen: HashMap<RootVector, usize> = HashMap::new();
        for s in &streams {
            for root in s.positive.iter().chain(&s.negative) {
                if root.height().abs() <= BigInt::from(H) {
                    *seen.entry(root.clone()).or_default() += 1;
                }
            }
        }
        let mut solutions = 0;
        for a in -H..=H {
            for b in -H..=H {
                let same_sign = (a >= 0 && b >= 0) || (a <= 0 && b <= 0);
                if (a + b).abs() > H || !same_sign || a * a - m as i64 * a * b + b * b != 1 {
                    continue;
                }
                solutions += 1;
                assert_eq!(seen.get(&RootVector::new(a, b)), Some(&1), "m={m}: ({a},{b})");
            }
        }
        assert_eq!(seen.len(), solutions, "m={m}: streams contain non-solutions");
    }
}

#[test]
fn labels_do_not_depend_on_child_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (q, radius, i) in [(2, 7, 1), (3, 5, 2), (5, 4, 1)] {
        let base = build_tree(q, radius, i).unwrap();
        let by_path = |t: &tits_eisenstein::tree::Tree| -> HashMap<Vec<usize>, _> {
            (0..t.len()).map(|id| (t.path(id), t.vertex(id).label)).collect()
        };
        let expected = by_path(&base);
        for _ in 0..3 {
            let t = build_tree_ordered(q, radius, i, |_, count| {
                let mut p: Vec<usize> = (0..count).collect();
                p.shuffle(&mut rng);
                p
            })
            .unwrap();
            assert_eq!(by_path(&t), expected);
            assert!(bruhat_mismatches(&t).is_empty());
        }
    }
}

/// `A_1^2 = A_2 + (q + 1) I`, with `A_1` applied as the neighbor sum.
#[test]
fn shell_operators_square() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for q in [2u32, 3, 4] {
        let radius = 5;
        let tree = build_tree(q, radius, 1).unwrap();
        for _ in 0..5 {
            let vals: Vec<i64> = (0..tree.len()).map(|_| rand::Rng::gen_range(&mut rng, -9..10)).collect();
            let f = VertexFunction::from_fn(&tree, radius, |id| r(vals[id], 1));
            let twice = adjacency_apply(&tree, &adjacency_apply(&tree, &f).unwrap()).unwrap();
            let k = RadialKernel::from_pairs([(2, r(1, 1)), (0, r(q as i64 + 1, 1))]);
            assert_eq!(radial_apply(&k, &tree, &f).unwrap(), twice);
        }
    }
}

/// Exact enumeration and the stratified count give the same partial sums.
#[test]
fn oracle_methods_agree() {
    for (q, n, d) in [(2, 0, 5), (2, 3, 5), (3, 1, 3)] {
        let z0 = r(1, 7);
        let v = LatticeVertex::sigma(n);
        let a = brute_eisenstein(q, &v, &z0, d, Method::Explicit).unwrap();
        let b = brute_eisenstein(q, &v, &z0, d, Method::Stratified).unwrap();
        assert_eq!(a.partials, b.partials, "q={q} n={n}");
        assert!(a.is_monotone());
        assert!(a.partials.iter().all(|p| p.is_positive()));
    }
}
