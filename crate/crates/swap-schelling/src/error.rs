use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph is not a tree")]
    NotATree,

    #[error("graph carries no grid metadata")]
    MissingGridMeta,

    #[error("swap endpoints carry the same color")]
    SameColorSwap,

    #[error("coloring does not match the type vector")]
    TypeMismatch,

    #[error("characterization check requires exactly two colors, got {0}")]
    WrongColorCount(usize),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("unknown bound family: {0}")]
    UnknownFamily(String),

    #[error("missing parameter `{0}` for bound family")]
    MissingParam(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
