use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resource limit exceeded: {what} needs {requested}, cap is {cap}")]
    ResourceLimit {
        what: &'static str,
        requested: String,
        cap: u64,
    },

    /// The composed branch multiplier equals `p^k`, so the word has no
    /// fixed point.
    #[error("degenerate word {0}: composed multiplier equals p^k")]
    DegenerateWord(String),

    /// A property guaranteed for admissible maps did not hold.
    #[error("invariant breach: {0}")]
    InvariantBreach(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
