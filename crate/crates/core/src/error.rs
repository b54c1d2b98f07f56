use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial division is not exact")]
    Inexact,
    #[error("pole at z = {0}")]
    Pole(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("system has no solution over the rational function field")]
    NoSolution,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("insufficient precision: need {needed} places, have {available}")]
    InsufficientPrecision { needed: usize, available: usize },
    #[error("insufficient enumeration degree: {0}")]
    InsufficientDegree(String),
}
