use thiserror::Error;

#[derive(Debug, Error)]
pub enum SieveError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// A theoretical guarantee was violated at runtime (e.g. an empty violation
    /// set while the termination criterion still fails).
    #[error("internal consistency violation: {0}")]
    Consistency(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, SieveError>;

pub(crate) fn check_len(context: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(SieveError::DimensionMismatch {
            context,
            expected,
            got,
        })
    }
}
