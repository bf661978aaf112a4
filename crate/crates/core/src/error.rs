use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("height of node {child} ({child_height}) is not below its parent {parent} ({parent_height})")]
    Monotonicity {
        child: usize,
        parent: usize,
        child_height: f64,
        parent_height: f64,
    },

    #[error("invalid tree structure: {0}")]
    Structure(String),

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("invalid point reference: {0}")]
    InvalidPoint(String),

    #[error("offset reaches height {0} above the root and the tree has no root ray")]
    AboveRoot(f64),

    #[error("node degree {degree} exceeds the configured bound {bound}")]
    DegreeExceeded { degree: usize, bound: usize },

    #[error("witness is not defined on the required grid: {0}")]
    GridMismatch(String),

    #[error("grid of {size} points exceeds the exhaustive-search cap of {cap}")]
    GridTooLarge { size: usize, cap: usize },

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Whether the error reports a capacity limit rather than bad input.
    pub fn is_capacity(&self) -> bool {
        matches!(
            self,
            Error::DegreeExceeded { .. } | Error::GridTooLarge { .. } | Error::TooLarge(_)
        )
    }
}
