//! Eisenstein series on the quotient ray: `E(n) = c1 z^{-n} + c2 (qz)^n`.
//!
//! The coefficients are not written down by hand. They come out of the exact
//! solver applied to the normalization row and the boundary rule at `sigma_0`.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{solve_param_system, LaurentPoly, ParamSystem, RationalFunc};
use crate::spectral::{lambda, ray_adjacency_apply, RayFunction};
use crate::tree::IwasawaLabel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    C1Unit,
    OracleScaled,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinData {
    pub q: u32,
    pub lambda: LaurentPoly,
    pub c1: RationalFunc,
    pub c2: RationalFunc,
    pub normalization: Normalization,
    /// Exceptional locus reported by the solver.
    pub locus: LaurentPoly,
}

/// `(qz, 1/z)`, the roots of `x^2 - lambda x + q`.
pub fn characteristic_roots(q: u32) -> (LaurentPoly, LaurentPoly) {
    (LaurentPoly::from_terms([(1, q as i64)]), LaurentPoly::z_pow(-1))
}

fn rf(p: LaurentPoly) -> RationalFunc {
    RationalFunc::from_poly(p)
}

/// Unknowns `(c1, c2)`. Row 1 fixes `c1`; row 2 is `lambda E(0) = (q+1) E(1)`
/// with `E(0) = c1 + c2` and `E(1) = c1/z + c2 qz`.
pub fn boundary_system(q: u32, c1: &RationalFunc) -> ParamSystem {
    let lam = rf(lambda(q));
    let (r_plus, r_minus) = characteristic_roots(q);
    let qp1 = RationalFunc::from_int(q as i64 + 1);
    let a = &lam - &(&qp1 * &rf(r_minus));
    let b = &lam - &(&qp1 * &rf(r_plus));
    ParamSystem {
        matrix: vec![vec![RationalFunc::one(), RationalFunc::zero()], vec![a, b]],
        rhs: vec![c1.clone(), RationalFunc::zero()],
    }
}

pub fn eisenstein_ray(q: u32) -> Result<EisensteinData> {
    eisenstein_ray_scaled(q, RationalFunc::one(), Normalization::C1Unit)
}

/// Solves the boundary system with a prescribed `c1`.
pub fn eisenstein_ray_scaled(q: u32, c1: RationalFunc, normalization: Normalization) -> Result<EisensteinData> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q must be at least 2, got {q}")));
    }
    let sol = solve_param_system(&boundary_system(q, &c1))?;
    Ok(EisensteinData {
        q,
        lambda: lambda(q),
        c1: sol.solution[0].clone(),
        c2: sol.solution[1].clone(),
        normalization,
        locus: sol.exceptional_locus,
    })
}

impl EisensteinData {
    /// `E(n)` as a rational function.
    pub fn value(&self, n: u32) -> RationalFunc {
        let (r_plus, r_minus) = characteristic_roots(self.q);
        &(&self.c1 * &rf(r_minus.pow(n))) + &(&self.c2 * &rf(r_plus.pow(n)))
    }

    /// Same data with `c2` multiplied by `z`; a negative control.
    pub fn perturbed(&self) -> Self {
        EisensteinData { c2: &self.c2 * &RationalFunc::z(), ..self.clone() }
    }
}

/// `E(0..=n_max)`, symbolically.
pub fn eisenstein_values(data: &EisensteinData, n_max: u32) -> RayFunction<RationalFunc> {
    RayFunction::new((0..=n_max).map(|n| data.value(n)).collect())
}

/// `E(0..=n_max)` evaluated at `z0`; a pole of any value is an error.
pub fn eisenstein_values_at(data: &EisensteinData, n_max: u32, z0: &BigRational) -> Result<RayFunction<BigRational>> {
    let vals = (0..=n_max).map(|n| data.value(n).eval(z0)).collect::<Result<Vec<_>>>()?;
    Ok(RayFunction::new(vals))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub recurrence_ok: bool,
    pub boundary_ok: bool,
}

impl IdentityCheck {
    pub fn ok(&self) -> bool {
        self.recurrence_ok && self.boundary_ok
    }
}

/// `lambda E(n) = q E(n-1) + E(n+1)` for `1 <= n < n_max`, and the boundary
/// rule at `n = 0`, exactly.
pub fn check_identities(data: &EisensteinData, n_max: u32) -> IdentityCheck {
    let e = eisenstein_values(data, n_max);
    let lam = rf(data.lambda.clone());
    let te = ray_adjacency_apply(data.q, &e).expect("at least two values");
    IdentityCheck {
        boundary_ok: te.values[0] == &lam * &e.values[0],
        recurrence_ok: (1..te.len()).all(|n| te.values[n] == &lam * &e.values[n]),
    }
}

/// The same identities after evaluating at `z0`.
pub fn check_identities_at(data: &EisensteinData, n_max: u32, z0: &BigRational) -> Result<IdentityCheck> {
    let e = eisenstein_values_at(data, n_max, z0)?;
    let lam = data.lambda.eval(z0)?;
    let te = ray_adjacency_apply(data.q, &e)?;
    Ok(IdentityCheck {
        boundary_ok: te.values[0] == &lam * &e.values[0],
        recurrence_ok: (1..te.len()).all(|n| te.values[n] == &lam * &e.values[n]),
    })
}

/// `c2(z) c2(1/(qz)) = 1`.
pub fn functional_equation_check(data: &EisensteinData) -> bool {
    (&data.c2 * &data.c2.dual_substitute(data.q)).is_one()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poles {
    pub denominator: LaurentPoly,
    pub rational: Vec<BigRational>,
}

pub fn poles(data: &EisensteinData) -> Poles {
    Poles { denominator: data.c2.den().clone(), rational: data.c2.rational_poles() }
}

/// Ray heights `H(sigma_n) = -n` for the labeling `i = 1`, read by walking
/// `neighbor_labels` down from the base label.
pub fn ray_heights(n_max: u32) -> Vec<i64> {
    let mut label = IwasawaLabel::new(1, 0, 1);
    let mut out = vec![label.height()];
    for _ in 0..n_max {
        label = label.neighbor_labels().0;
        out.push(label.height());
    }
    out
}

/// Constant-term profile `c1 Psi_s + c2 Psi_{1-s}` on `sigma_0..=sigma_n_max`,
/// with `Psi_s = z^H` and `Psi_{1-s}` its dual substitution.
pub fn constant_term_profile(data: &EisensteinData, n_max: u32) -> RayFunction<RationalFunc> {
    RayFunction::new(
        ray_heights(n_max)
            .into_iter()
            .map(|h| {
                let psi = rf(LaurentPoly::z_pow(h));
                &(&data.c1 * &psi) + &(&data.c2 * &psi.dual_substitute(data.q))
            })
            .collect(),
    )
}

/// Formal combination `x a^s + y a^{1-s}`, coefficients polynomials in `s`
/// (the variable of [`LaurentPoly`] plays the role of `s` here).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalPair {
    pub coeff_s: LaurentPoly,
    pub coeff_1ms: LaurentPoly,
}

impl FormalPair {
    /// `[a d/da - (1-s)]`, diagonal with entries `s - (1-s)` and `0`.
    pub fn apply_scaling(&self) -> Self {
        let s = LaurentPoly::z();
        let one_minus_s = &LaurentPoly::one() - &s;
        // a d/da acts on a^e by e
        let shift = |e: &LaurentPoly| e - &one_minus_s;
        FormalPair { coeff_s: &self.coeff_s * &shift(&s), coeff_1ms: &self.coeff_1ms * &shift(&one_minus_s) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub scaling_identity: bool,
    pub eigen_basis: bool,
    pub difference_vanishes: bool,
}

impl UniquenessReport {
    pub fn ok(&self) -> bool {
        self.scaling_identity && self.eigen_basis && self.difference_vanishes
    }
}

/// Number of ray vertices used by the uniqueness and truncation checks.
pub const RAY_CHECK_LEN: u32 = 30;

pub fn uniqueness_system_check(q: u32) -> Result<UniquenessReport> {
    // (i): c1 = 1 and an arbitrary c2
    let pair = FormalPair { coeff_s: LaurentPoly::one(), coeff_1ms: LaurentPoly::from_terms([(0, 3), (2, -1)]) };
    let image = pair.apply_scaling();
    let scaling_identity = image.coeff_1ms.is_zero() && image.coeff_s == LaurentPoly::from_terms([(0, -1), (1, 2)]);

    // (ii): both exponentials are lambda-eigenfunctions away from sigma_0
    let n = RAY_CHECK_LEN as i64;
    let lam = lambda(q);
    let (r_plus, r_minus) = characteristic_roots(q);
    let eigen_basis = [r_minus.clone(), r_plus.clone()].iter().all(|root| {
        let f = RayFunction::new((0..n).map(|k| root.pow(k as u32)).collect());
        let tf = ray_adjacency_apply(q, &f).expect("length 30");
        (1..tf.len()).all(|k| tf.values[k] == &lam * &f.values[k])
    });

    // difference d = alpha z^{-n} + beta (qz)^n of two solutions with equal c1:
    // alpha = 0 and the boundary rule force alpha = beta = 0
    let data = eisenstein_ray(q)?;
    let boundary = &boundary_system(q, &RationalFunc::one()).matrix[1];
    let sys = ParamSystem::new(
        vec![vec![RationalFunc::one(), RationalFunc::zero()], boundary.clone()],
        vec![RationalFunc::zero(), RationalFunc::zero()],
    )?;
    let sol = solve_param_system(&sys)?;
    let diff = EisensteinData { c1: sol.solution[0].clone(), c2: sol.solution[1].clone(), ..data };
    let difference_vanishes =
        sol.rank == 2 && eisenstein_values(&diff, RAY_CHECK_LEN - 1).values.iter().all(RationalFunc::is_zero);

    Ok(UniquenessReport { scaling_identity, eigen_basis, difference_vanishes })
}

#[derive(Clone, Debug, Serialize)]
pub struct EisensteinReport {
    pub q: u32,
    pub c1: RationalFunc,
    pub c2: RationalFunc,
    pub lambda: String,
    pub poles: Vec<String>,
    pub denominator: String,
    pub locus: String,
    pub functional_eq: bool,
    pub boundary_ok: bool,
    pub recurrence_ok: bool,
}

pub fn report(data: &EisensteinData) -> EisensteinReport {
    let p = poles(data);
    let ids = check_identities(data, RAY_CHECK_LEN);
    EisensteinReport {
        q: data.q,
        c1: data.c1.clone(),
        c2: data.c2.clone(),
        lambda: data.lambda.to_string(),
        poles: p.rational.iter().map(ToString::to_string).collect(),
        denominator: p.denominator.to_string(),
        locus: data.locus.to_string(),
        functional_eq: functional_equation_check(data),
        boundary_ok: ids.boundary_ok,
        recurrence_ok: ids.recurrence_ok,
    }
}

/// `true` when `z0` is a pole of `c2`.
pub fn is_pole(data: &EisensteinData, z0: &BigRational) -> bool {
    data.c2.den().eval(z0).map_or(true, |v| v.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn characteristic_roots_vieta() {
        for q in 2..6 {
            let (a, b) = characteristic_roots(q);
            assert_eq!(&a * &b, LaurentPoly::from_int(q as i64));
            assert_eq!(&a + &b, lambda(q));
            let x = &(&(&a * &a) - &(&lambda(q) * &a)) + &LaurentPoly::from_int(q as i64);
            assert!(x.is_zero());
        }
    }

    #[test]
    fn solved_coefficients_q2() {
        let d = eisenstein_ray(2).unwrap();
        assert!(d.c1.is_one());
        assert_eq!(d.c2.to_string(), "(2-2z^2)/(1-4z^2)");
        assert_eq!(d.locus, LaurentPoly::from_terms([(0, 1), (2, -4)]));
        let z0 = r(1, 4);
        assert_eq!(d.c2.eval(&z0).unwrap(), r(5, 2));
        let e = eisenstein_values_at(&d, 2, &z0).unwrap();
        assert_eq!(e.values, vec![r(7, 2), r(21, 4), r(133, 8)]);
        let lam = d.lambda.eval(&z0).unwrap();
        assert_eq!(&lam * &e.values[0], r(63, 4));
        assert_eq!(r(2, 1) * &e.values[0] + &e.values[2], &lam * &e.values[1]);
    }

    #[test]
    fn identities_and_functional_equation() {
        for q in 2..8 {
            let d = eisenstein_ray(q).unwrap();
            assert!(check_identities(&d, 12).ok());
            assert!(functional_equation_check(&d));
            let den = d.c2.den();
            assert!(d.locus.div_exact(den).is_ok());
        }
        let d = eisenstein_ray(2).unwrap();
        assert_eq!(d.c2.eval(&r(1, 4)).unwrap() * d.c2.eval(&r(2, 1)).unwrap(), r(1, 1));
        let bad = d.perturbed();
        assert!(!functional_equation_check(&bad));
        assert!(!check_identities(&bad, 12).boundary_ok);
    }

    #[test]
    fn pole_set_q2() {
        let d = eisenstein_ray(2).unwrap();
        let p = poles(&d);
        assert_eq!(p.rational, vec![r(-1, 2), r(1, 2)]);
        assert!(!is_pole(&d, &r(1, 4)));
        assert!(eisenstein_values_at(&d, 3, &r(1, 2)).is_err());
        let off = r(1, 2) + r(1, 100);
        assert!(check_identities_at(&d, 10, &off).unwrap().ok());
    }

    #[test]
    fn truncation_of_e_is_zero() {
        let d = eisenstein_ray(3).unwrap();
        let e = eisenstein_values(&d, 29);
        let t = crate::spectral::truncate_ray(&e, &constant_term_profile(&d, 29)).unwrap();
        assert!(t.is_zero());
        assert_eq!(ray_heights(3), vec![0, -1, -2, -3]);
    }

    #[test]
    fn uniqueness() {
        let u = uniqueness_system_check(2).unwrap();
        assert!(u.ok(), "{u:?}");
        let p = FormalPair { coeff_s: LaurentPoly::from_int(5), coeff_1ms: LaurentPoly::zero() };
        assert_eq!(p.apply_scaling().coeff_s, LaurentPoly::from_terms([(0, -5), (1, 10)]));
    }
}
