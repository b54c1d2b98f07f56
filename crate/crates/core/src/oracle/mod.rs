//! Brute-force ground truth for the affine case `m = 2`, `q` prime: the group
//! SL2(F_q[t]) acting on the tree of F_q((1/t))-lattice classes.

pub mod brute;
pub mod cosets;
pub mod fq;
pub mod lattice;

pub use brute::{
    brute_eisenstein, compare, constant_term_cross_check, decimal, measured_c1, oracle_scaled, orbit_height_bound,
    quotient_ray_check, quotient_ray_check_with, ray_index, BruteSum, Comparison, Method, OrbitBound, RayQuotient,
    CAUCHY_TOL,
};
pub use cosets::{coset_count, coset_rows, enumerate_cosets, euler_phi, phi_sum};
pub use fq::{complete_to_sl2, FqPoly, Matrix2};
pub use lattice::{act, default_precision, height_of, lattice_ball, vertex_of, LatticeVertex};
