use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared across the crate. `BudgetExceeded` is a first-class signal
/// that a quantity lives beyond the configured magnitude budget; callers
/// surface it as "skipped with reason", never as a pass.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("magnitude budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("set is not maximal in the family")]
    NotMaximal,
    #[error("exact search cap exceeded ({what}: {got} > {cap})")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        got: usize,
    },
    #[error("argument outside the gauge window")]
    OutOfWindow,
    #[error("invalid parameter sequence: {0}")]
    InvalidSequence(String),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn budget(what: impl Into<String>) -> Self {
        Error::BudgetExceeded(what.into())
    }

    pub fn input(what: impl Into<String>) -> Self {
        Error::InvalidInput(what.into())
    }
}
