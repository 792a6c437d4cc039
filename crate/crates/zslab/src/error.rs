use thiserror::Error;

/// Crate-wide error type. Budget refusals are deliberately distinct from
/// plain invalid arguments so the CLI can map them to their own exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("length {len} out of range 0..={max}")]
    LengthOutOfRange { len: u64, max: u64 },

    #[error("enumeration budget exceeded: needed {needed}, budget {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("cannot orient system: {identity} introduces {unknowns} unknown lengths")]
    CannotOrient { identity: String, unknowns: usize },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
