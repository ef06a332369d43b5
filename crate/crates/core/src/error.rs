use thiserror::Error;

/// Errors produced by series arithmetic, operator construction and checks.
#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("singular input: {0}")]
    Singular(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole at {pole} lies in the closed unit disk")]
    PoleInDisk { pole: String },

    #[error("symbol not certified: {0}")]
    Certification(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Certification(_) | Error::PoleInDisk { .. } => 3,
            Error::Numerical(_) => 4,
            Error::Io(_) | Error::Json(_) | Error::Csv(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
