use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid profile parameters: {0}")]
    InvalidProfile(String),

    #[error("integration failed at t = {t}: {reason}")]
    Integration { t: f64, reason: String },

    #[error("step size underflow at t = {t} (stiffness)")]
    Stiffness { t: f64 },

    #[error("sigma collapse (sigma < {guard}) at t = {t}")]
    Collapse { t: f64, guard: f64 },

    #[error("t = {t} outside the solution range [{lo}, {hi}]")]
    Range { t: f64, lo: f64, hi: f64 },

    #[error("unsupported parameters: {0}")]
    UnsupportedParameter(String),

    #[error("parity mismatch: N = {n}, M = {m} differ in parity, matrix element is zero")]
    Parity { n: usize, m: usize },

    #[error("hypergeometric pole: c = {c} hits a nonpositive integer inside the sum")]
    Pole { c: f64 },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("truncation dimension too small: {0}")]
    Dimension(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
