//! Exact spectral computations on the Tits tree of a rank-2 Kac-Moody group.

pub mod eisenstein;
pub mod error;
pub mod exactalg;
pub mod oracle;
pub mod report;
pub mod roots;
pub mod spectral;
pub mod tree;

pub use error::{Error, Result};
