use thiserror::Error;

use crate::ground::Triangle;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid move: {0}")]
    InvalidMove(String),

    /// `x - 2` and `x + 2` sit in frozen triangles and can never be mutated away.
    #[error("leaf {leaf} is frozen at x = {x} and cannot be removed")]
    FrozenLeaf { x: usize, leaf: usize },

    #[error("valued family is not unitary in x = {x}: {detail}")]
    NotUnitary { x: usize, detail: String },

    #[error("division by zero: {0}")]
    ZeroPivot(String),

    #[error("oracle budget of {budget} expansions exhausted before reaching {target} ({visited} families visited)")]
    BudgetExhausted {
        target: Triangle,
        budget: usize,
        visited: usize,
    },

    #[error("star graph violates condition {condition}: {detail}")]
    ConverseCondition {
        condition: &'static str,
        detail: String,
    },

    #[error("inconsistent quiddity rows: {0}")]
    InconsistentRows(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("internal consistency error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn invalid_move(msg: impl Into<String>) -> Self {
        Error::InvalidMove(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
