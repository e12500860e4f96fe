use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke an operation's precondition (dimension mismatch and the like).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("polytope is not reflexive: {0}")]
    NotReflexive(String),

    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),

    #[error("non-unimodular simplex {witness:?} (normalized volume {volume})")]
    PrimitivityFailed { witness: Vec<Vec<i64>>, volume: i64 },

    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// Coboundary assembly produced `δ∘δ ≠ 0`.
    #[error("assembly error: {0}")]
    Assembly(String),

    #[error("hypothesis failed: {reason}")]
    HypothesisFailed {
        reason: String,
        witness: Vec<Vec<i64>>,
    },
}

impl Error {
    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
