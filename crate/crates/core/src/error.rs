use thiserror::Error;

/// Errors surfaced by the library. The CLI maps these onto exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("column {column} is zero (columns are numbered from 1)")]
    ZeroColumn { column: usize },

    #[error("matrix has {n} columns, above the configured cap of {max}")]
    TooManyColumns { n: usize, max: usize },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    /// Stable process exit code: 1 bad input, 2 consistency failure, 3 budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidMatrix(_)
            | Error::ZeroColumn { .. }
            | Error::TooManyColumns { .. }
            | Error::OutOfRange(_)
            | Error::Domain(_) => 1,
            Error::Consistency(_) => 2,
            Error::Budget(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
