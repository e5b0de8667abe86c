use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// An exhaustive method was asked to run above its size guard.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// An edge list does not describe a valid r-uniform hypergraph.
    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),
    /// A monotone property never holds along the whole process.
    #[error("no hitting time: {0}")]
    NoHit(String),
    /// The defining equation has no root in (0, 1).
    #[error("no root: {0}")]
    NoRoot(String),
    /// A randomized generator exhausted its retries.
    #[error("generation failed: {0}")]
    Generation(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

macro_rules! argument {
    ($($arg:tt)*) => { $crate::error::Error::Argument(alloc::format!($($arg)*)) };
}
macro_rules! capacity {
    ($($arg:tt)*) => { $crate::error::Error::Capacity(alloc::format!($($arg)*)) };
}
pub(crate) use argument;
pub(crate) use capacity;
