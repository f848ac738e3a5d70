use thiserror::Error;

/// Errors raised by the state, dynamics, resource and bound routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RslError {
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("operator is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("integration failed at t = {time:.6}: {reason}; try more steps")]
    IntegrationFailure { time: f64, reason: String },
    #[error("unsupported state for this oracle: {0}")]
    UnsupportedState(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("empty grid")]
    EmptyGrid,
    #[error("empty initial-state family")]
    EmptyFamily,
}

pub type Result<T> = std::result::Result<T, RslError>;
