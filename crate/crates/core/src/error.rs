use thiserror::Error;

/// Errors produced by solvers and parameter constructors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter record violates its invariants.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },

    /// The relaxation constant is below the model's threshold and the run
    /// was not flagged to permit it.
    #[error("relaxation constant {m} below threshold {threshold}")]
    RelaxationViolation { m: f64, threshold: f64 },

    /// A solver produced a non-finite value at iterate `k`, mesh index `p`.
    #[error("non-finite value at iterate k={k}, step p={p}")]
    NonFinite { k: usize, p: usize },

    /// A fine grid cannot be mapped onto a coarse grid by exact indexing.
    #[error("fine step count {fine} is not a multiple of coarse step count {coarse}")]
    GridMismatch { fine: usize, coarse: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
