use thiserror::Error;

use crate::model::ParseError;

/// Input errors. Axiom violations are reported as data by the validators,
/// never through this type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("duplicate identifier `{0}`")]
    Duplicate(String),
    #[error("conflicting definition: {0}")]
    Conflict(String),
    #[error("missing assignment for `{0}`")]
    MissingAssignment(String),
    #[error("anchor mismatch: {0}")]
    AnchorMismatch(String),
    #[error("orientation mismatch: expected a {expected} family")]
    Orientation { expected: &'static str },
    #[error("index mismatch: {0}")]
    IndexMismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("size out of range: {0}")]
    SizeOutOfRange(String),
    #[error("enumeration universe has {0} elements, more than the supported 128")]
    UniverseTooLarge(usize),
    #[error("unknown section `{0}`")]
    UnknownSection(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
