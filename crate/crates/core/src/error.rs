use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input is not a well-formed design, flow or resolution.
    #[error("malformed input: {0}")]
    Malformed(String),

    /// A hypothesis of the requested construction does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A deterministic search ran out of its node budget.
    #[error("search budget exhausted after {nodes} nodes ({context})")]
    BudgetExceeded { context: String, nodes: u64 },

    /// A design or flow failed its self-check.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("flow is bound to design {found}, expected {expected}")]
    HashMismatch { expected: String, found: String },

    #[error("flow has {found} values but the design has {expected} blocks")]
    LengthMismatch { expected: usize, found: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::Malformed(msg.into())
    }
}
