use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed poset description or a relation that is not a partial order.
    #[error("invalid poset: {0}")]
    Poset(String),

    /// A builder or operation was called outside its precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An input certificate or witness failed validation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configured search/size cap was hit. Never a claim about the answer.
    #[error("budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: String, limit: u64 },

    /// Artifact could not be decoded.
    #[error("parse error: {0}")]
    Parse(String),

    /// Artifact decoded but refers to something that does not exist.
    #[error("reference error: {0}")]
    Reference(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn budget(what: impl Into<String>, limit: u64) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            limit,
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
