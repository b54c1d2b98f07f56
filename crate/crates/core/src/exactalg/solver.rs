//! Parametrized linear solver over the field `Q(z)`.
//!
//! Rows are first cleared to polynomial rows, then reduced by fraction-free
//! (Bareiss) elimination, so every intermediate entry is a minor of the cleared
//! augmented matrix. The last pivot is the determinant of the chosen maximal
//! minor; its zero set is the exceptional locus.

use num_traits::Zero;

use super::laurent::LaurentPoly;
use super::rational::RationalFunc;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSystem {
    pub matrix: Vec<Vec<RationalFunc>>,
    pub rhs: Vec<RationalFunc>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSolution {
    pub solution: Vec<RationalFunc>,
    /// Primitive integer polynomial; the solution is valid wherever it is nonzero.
    pub exceptional_locus: LaurentPoly,
    pub rank: usize,
    /// Column index of each pivot, in elimination order.
    pub pivot_cols: Vec<usize>,
}

impl ParamSystem {
    pub fn new(matrix: Vec<Vec<RationalFunc>>, rhs: Vec<RationalFunc>) -> Result<Self> {
        if matrix.len() != rhs.len() {
            return Err(Error::Dimension(format!("{} rows but {} right-hand sides", matrix.len(), rhs.len())));
        }
        let cols = matrix.first().map_or(0, Vec::len);
        if matrix.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged matrix".into()));
        }
        Ok(ParamSystem { matrix, rhs })
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    /// `matrix * x - rhs`, exactly.
    pub fn residual(&self, x: &[RationalFunc]) -> Vec<RationalFunc> {
        self.matrix
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| {
                let mut acc = -b;
                for (a, xi) in row.iter().zip(x) {
                    acc = &acc + &(a * xi);
                }
                acc
            })
            .collect()
    }
}

/// Multiplies a row by the lcm of its denominators (and by a power of `z` if
/// needed) so that every entry becomes an ordinary polynomial.
pub fn clear_row(row: &[RationalFunc]) -> Vec<LaurentPoly> {
    let mut lcm = LaurentPoly::one();
    for x in row {
        let d = x.den();
        let g = LaurentPoly::poly_gcd(&lcm, d);
        lcm = (&lcm * d).div_exact(&g).expect("gcd divides");
    }
    let mut out: Vec<LaurentPoly> =
        row.iter().map(|x| (x.num() * &lcm).div_exact(x.den()).expect("den divides lcm")).collect();
    let low = out.iter().filter_map(LaurentPoly::min_exp).min().unwrap_or(0);
    if low < 0 {
        for p in &mut out {
            *p = p.shift(-low);
        }
    }
    out
}

pub fn solve_param_system(sys: &ParamSystem) -> Result<ParamSolution> {
    let n_rows = sys.rows();
    let n_cols = sys.cols();
    let mut a: Vec<Vec<LaurentPoly>> = sys
        .matrix
        .iter()
        .zip(&sys.rhs)
        .map(|(row, b)| {
            let mut full = row.clone();
            full.push(b.clone());
            clear_row(&full)
        })
        .collect();

    let mut prev = LaurentPoly::one();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        // lowest-degree nonzero entry keeps intermediate minors small
        let Some(p) = (r..n_rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| (a[i][c].max_exp().unwrap_or(0), a[i][c].num_terms()))
        else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..n_rows {
            let factor = a[i][c].clone();
            for j in c + 1..=n_cols {
                let v = &(&a[r][c] * &a[i][j]) - &(&factor * &a[r][j]);
                a[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][c] = LaurentPoly::zero();
        }
        prev = a[r][c].clone();
        pivot_cols.push(c);
        r += 1;
    }
    let rank = r;
    if (rank..n_rows).any(|i| !a[i][n_cols].is_zero()) {
        return Err(Error::NoSolution);
    }

    let mut solution = vec![RationalFunc::zero(); n_cols];
    for (k, &c) in pivot_cols.iter().enumerate().rev() {
        let mut acc = RationalFunc::from_poly(a[k][n_cols].clone());
        for j in c + 1..n_cols {
            if !a[k][j].is_zero() && !solution[j].is_zero() {
                acc = &acc - &(&RationalFunc::from_poly(a[k][j].clone()) * &solution[j]);
            }
        }
        solution[c] = acc.div(&RationalFunc::from_poly(a[k][c].clone()))?;
    }
    Ok(ParamSolution { solution, exceptional_locus: prev.primitive_part(), rank, pivot_cols })
}

/// Determinant by cofactor expansion along the first row. Independent of the
/// elimination above and only meant for small matrices.
pub fn determinant(m: &[Vec<RationalFunc>]) -> RationalFunc {
    let n = m.len();
    if n == 0 {
        return RationalFunc::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = RationalFunc::zero();
    for (j, a) in m[0].iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let minor: Vec<Vec<RationalFunc>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = a * &determinant(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// True when `p` has no zero at `z0` (a zero polynomial vanishes everywhere).
pub fn off_locus(locus: &LaurentPoly, z0: &num_rational::BigRational) -> bool {
    locus.eval(z0).is_ok_and(|v| !v.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn rf(s: &str) -> RationalFunc {
        s.parse().unwrap()
    }

    #[test]
    fn identity_system() {
        let sys =
            ParamSystem::new(vec![vec![rf("1"), rf("0")], vec![rf("0"), rf("1")]], vec![rf("1"), rf("z")]).unwrap();
        let s = solve_param_system(&sys).unwrap();
        assert_eq!(s.solution, vec![rf("1"), rf("z")]);
        assert!(s.exceptional_locus.is_one());
    }

    #[test]
    fn one_by_one() {
        let sys = ParamSystem::new(vec![vec![rf("z")]], vec![rf("1")]).unwrap();
        let s = solve_param_system(&sys).unwrap();
        assert_eq!(s.solution, vec![rf("z^-1")]);
        assert_eq!(s.exceptional_locus, LaurentPoly::z());
    }

    #[test]
    fn inconsistent_rejected() {
        let sys =
            ParamSystem::new(vec![vec![rf("z"), rf("1")], vec![rf("2z"), rf("2")]], vec![rf("1"), rf("3")]).unwrap();
        assert_eq!(solve_param_system(&sys), Err(Error::NoSolution));
    }

    #[test]
    fn underdetermined_consistent() {
        let sys =
            ParamSystem::new(vec![vec![rf("z"), rf("1")], vec![rf("2z"), rf("2")]], vec![rf("1"), rf("2")]).unwrap();
        let s = solve_param_system(&sys).unwrap();
        assert_eq!(s.rank, 1);
        assert!(sys.residual(&s.solution).iter().all(RationalFunc::is_zero));
    }

    #[test]
    fn dimension_checks() {
        assert!(ParamSystem::new(vec![vec![rf("1")]], vec![]).is_err());
        assert!(ParamSystem::new(vec![vec![rf("1")], vec![]], vec![rf("1"), rf("1")]).is_err());
    }

    #[test]
    fn cofactor_determinant() {
        let m = vec![vec![rf("z"), rf("1")], vec![rf("1"), rf("z")]];
        assert_eq!(determinant(&m), rf("-1+z^2"));
    }

    #[test]
    fn off_locus_check() {
        let l = LaurentPoly::from_terms([(0, 1), (2, -4)]);
        assert!(!off_locus(&l, &BigRational::new(1.into(), 2.into())));
        assert!(off_locus(&l, &BigRational::new(1.into(), 4.into())));
    }
}
