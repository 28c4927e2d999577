use thiserror::Error;

/// Errors raised by the engine.
///
/// "No witness" is never an error: finders return `Option`. Errors cover
/// malformed input, violated preconditions, resource caps and store
/// integrity.
#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("index set must be nonempty")]
    EmptyIndexSet,

    #[error("invalid progression: {0}")]
    InvalidProgression(String),

    #[error("value {value} outside the coloring domain [1, {max}]")]
    OutOfDomain { value: String, max: usize },

    #[error("canonical order violated: color {color} after max color {max_used}")]
    NotCanonical { color: u32, max_used: u32 },

    #[error("color {color} outside [1, {colors}]")]
    InvalidColor { color: u32, colors: u32 },

    #[error("blocks are not pairwise disjoint")]
    NotDisjoint,

    #[error("resource cap exceeded: {what} (limit {limit})")]
    Resource { what: String, limit: u64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("store integrity failure: {0}")]
    Integrity(String),

    #[error("internal logic alarm: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn resource(what: impl Into<String>, limit: u64) -> Self {
        Error::Resource {
            what: what.into(),
            limit,
        }
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    /// True for errors caused by a configured cap rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
