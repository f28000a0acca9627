use thiserror::Error;

/// Errors raised by the engine. Parse failures, constraint violations and
/// arithmetic faults are kept apart so the CLI can map them to exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("coefficient of z^{requested} requested but series is only known up to z^{order}")]
    TruncationExceeded { requested: usize, order: usize },
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("wrong basis: expected {expected}, found {found}")]
    WrongBasis { expected: &'static str, found: &'static str },
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("linear system is underdetermined (rank {rank} < {columns} unknowns)")]
    Underdetermined { rank: usize, columns: usize },
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("coincident points: {0}")]
    CoincidentPoints(String),
    #[error("pole at z = {pole} has order {found}, expected {expected}")]
    PoleOrder { pole: String, expected: u32, found: u32 },
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
