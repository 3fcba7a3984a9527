use core::fmt;

/// Error type shared by oracles, solvers, and experiment plumbing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// An argument violated a documented precondition.
    InvalidArgument(&'static str),
    /// The requested computation exceeds the configured memory budget.
    Resource(&'static str),
    /// A prime window came back empty, so no order can be drawn from it.
    EmptyWindow,
    /// A bounded structure ran out of room (fresh-value pool, cycle slots).
    Capacity(&'static str),
    /// A budgeted oracle refused a query past its limit.
    BudgetExhausted,
    /// An internal consistency check failed; the oracle or state is broken.
    Inconsistent(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Resource(msg) => write!(f, "resource limit: {msg}"),
            Error::EmptyWindow => write!(f, "prime window is empty"),
            Error::Capacity(msg) => write!(f, "capacity exhausted: {msg}"),
            Error::BudgetExhausted => write!(f, "query budget exhausted"),
            Error::Inconsistent(msg) => write!(f, "internal inconsistency: {msg}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
