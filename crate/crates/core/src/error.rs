use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parameters not admissible: e1 = {e1} must exceed eta = {eta} (lambda = {lambda})")]
    Admissibility { lambda: f64, e1: f64, eta: f64 },
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("raw jump integral is undefined on the exceptional locus; use the closed form")]
    ExceptionalPath,
    #[error("invalid closure spec m = {m}, n = {n}: need gcd(m, n) = 1 and 0 < m < n")]
    InvalidSpec { m: u32, n: u32 },
    #[error("curve does not close: residual {0:e}")]
    NotClosed(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
