use thiserror::Error;

/// Errors raised by exact and analytic evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid modulus k={k} for {context}: {reason}")]
    InvalidModulus {
        k: u64,
        context: String,
        reason: String,
    },

    #[error("exponent j={j} is not coprime to order q={q}")]
    NotPrimitiveRoot { q: u64, j: u64 },

    #[error("cyclotomic order mismatch: {left} vs {right}")]
    OrderMismatch { left: u64, right: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("series did not converge within {terms} terms")]
    ConvergenceFailure { terms: usize },

    #[error("pole of zeta at s = 1")]
    PoleAtOne,

    #[error("every translation divisor degenerates near s = {at}")]
    DegenerateDivisor { at: String },

    #[error("internal consistency violation: {0}")]
    Consistency(String),

    #[error("no evaluation points supplied")]
    EmptyPoints,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
