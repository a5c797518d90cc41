use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    /// Malformed or inconsistent arguments (schedules, sample counts, parse failures).
    #[error("invalid input: {0}")]
    Input(String),

    /// A gamma argument landed exactly on a nonpositive integer.
    #[error("gamma has a pole at {pole}")]
    Pole { pole: i64 },

    /// Argument outside the region an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// Cancellation or conditioning exhausted the working precision.
    #[error("precision exhausted: {0}")]
    Precision(String),

    /// Zero error encountered while estimating a convergence order: the limit is
    /// already attained at working precision, so the order is undefined.
    #[error("limit attained at working precision (zero error at node {index}); order undefined")]
    LimitAttained { index: usize },
}

pub type Result<T> = std::result::Result<T, LabError>;
