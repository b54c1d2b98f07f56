//! Exact arithmetic in one variable `z` over the rationals.

pub mod laurent;
pub mod parse;
pub mod rational;
pub mod solver;

pub use laurent::LaurentPoly;
pub use parse::{parse_laurent, parse_rational, parse_rational_func};
pub use rational::RationalFunc;
pub use solver::{solve_param_system, ParamSolution, ParamSystem};
