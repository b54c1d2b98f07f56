//! Cosets of the upper unipotent subgroup in SL2(F_q[t]), indexed by their
//! bottom rows `(c, d)`: coprime, one per unit class (`c` monic, or `(0, 1)`).

use num_bigint::BigInt;
use num_traits::One;

use crate::error::Result;

use super::fq::{check_prime, complete_to_sl2, FqPoly, Matrix2};

/// Bottom rows with `max(deg c, deg d) == deg` exactly.
pub fn coset_rows_of_degree(q: u32, deg: usize) -> Result<Vec<(FqPoly, FqPoly)>> {
    check_prime(q)?;
    let mut out = Vec::new();
    if deg == 0 {
        out.push((FqPoly::zero(q), FqPoly::one(q)));
    }
    for a in 0..=deg {
        let ds: Vec<FqPoly> = if a == deg {
            let mut all = vec![FqPoly::zero(q)];
            for b in 0..=deg {
                all.extend(FqPoly::all_of_degree(q, Some(b)));
            }
            all
        } else {
            FqPoly::all_of_degree(q, Some(deg))
        };
        for c in FqPoly::monic_of_degree(q, a) {
            for d in &ds {
                if FqPoly::gcd(&c, d).is_one() {
                    out.push((c.clone(), d.clone()));
                }
            }
        }
    }
    Ok(out)
}

/// All bottom rows of degree at most `d_max`, in increasing degree.
pub fn coset_rows(q: u32, d_max: usize) -> Result<Vec<(FqPoly, FqPoly)>> {
    let mut out = Vec::new();
    for deg in 0..=d_max {
        out.extend(coset_rows_of_degree(q, deg)?);
    }
    Ok(out)
}

/// Representatives of the cosets with bottom-row degree at most `d_max`.
pub fn enumerate_cosets(q: u32, d_max: usize) -> Result<impl Iterator<Item = Matrix2>> {
    let rows = coset_rows(q, d_max)?;
    Ok(rows.into_iter().map(|(c, d)| complete_to_sl2(&c, &d).expect("rows are coprime")))
}

/// Monic irreducible factorization by trial division.
pub fn factor(c: &FqPoly) -> Vec<(FqPoly, u32)> {
    let p = c.p();
    let mut rest = c.monic();
    let mut out = Vec::new();
    let mut k = 1;
    while rest.degree().is_some_and(|d| d >= 2 * k) {
        for f in FqPoly::monic_of_degree(p, k) {
            let mut e = 0;
            loop {
                let (quo, rem) = rest.div_rem(&f);
                if !rem.is_zero() {
                    break;
                }
                rest = quo;
                e += 1;
            }
            if e > 0 {
                out.push((f, e));
            }
        }
        k += 1;
    }
    if rest.degree().is_some_and(|d| d > 0) {
        match out.iter_mut().find(|(f, _)| *f == rest) {
            Some(entry) => entry.1 += 1,
            None => out.push((rest, 1)),
        }
    }
    out.sort();
    out
}

/// Number of units in `F_q[t]/(c)`, from the factorization of `c`.
pub fn euler_phi(c: &FqPoly) -> BigInt {
    let q = BigInt::from(c.p());
    let mut acc = BigInt::one();
    for (f, e) in factor(c) {
        let norm = num_traits::pow(q.clone(), f.degree().unwrap_or(0));
        acc *= num_traits::pow(norm.clone(), e as usize - 1) * (norm - 1);
    }
    acc
}

/// Same count by listing residues coprime to `c`.
pub fn euler_phi_by_residues(c: &FqPoly) -> u64 {
    let p = c.p();
    let deg = c.degree().unwrap_or(0);
    (0..(p as u64).pow(deg as u32)).filter(|&i| FqPoly::gcd(c, &FqPoly::from_index(p, i)).is_one()).count() as u64
}

/// `S(a)`: the sum of `euler_phi` over monic `c` of degree `a`.
pub fn phi_sum(q: u32, a: usize) -> Result<BigInt> {
    check_prime(q)?;
    Ok(FqPoly::monic_of_degree(q, a).iter().map(euler_phi).sum())
}

/// `q^{2a} - q^{2a-1}` for `a >= 1`, and 1 for `a = 0`.
pub fn phi_sum_closed(q: u32, a: usize) -> BigInt {
    if a == 0 {
        return BigInt::one();
    }
    let q = BigInt::from(q);
    num_traits::pow(q.clone(), 2 * a) - num_traits::pow(q, 2 * a - 1)
}

/// Number of rows with `c` monic of degree `a` and `d` of degree exactly `b`,
/// given `phi[k] = S(k)`.
pub fn stratum_count(q: u32, a: usize, b: usize, phi: &[BigInt]) -> BigInt {
    let gap = a.abs_diff(b);
    BigInt::from(q - 1) * num_traits::pow(BigInt::from(q), gap) * &phi[a.min(b)]
}

/// Number of rows of degree at most `d_max`, by strata.
pub fn coset_count(q: u32, d_max: usize) -> Result<BigInt> {
    let phi = (0..=d_max).map(|a| phi_sum(q, a)).collect::<Result<Vec<_>>>()?;
    // (0, 1) and (1, 0)
    let mut n = BigInt::from(2);
    for a in 0..=d_max {
        for b in 0..=d_max {
            n += stratum_count(q, a, b, &phi);
        }
    }
    Ok(n)
}
