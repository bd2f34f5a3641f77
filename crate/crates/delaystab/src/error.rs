use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed data structure (non-covering breakpoints, bad delay order, ...).
    #[error("structural error: {0}")]
    Structural(String),

    /// Argument outside its admissible range.
    #[error("range error: {0}")]
    Range(String),

    /// Incompatible dimensions between model and controller.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A mathematical precondition of the requested analysis is violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Configuration file or CLI override problem.
    #[error("config error: {0}")]
    Config(String),

    /// Numerical breakdown that should not occur on valid inputs.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
