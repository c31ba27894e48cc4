use std::fmt;

/// Error type shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates a precondition (non-prime characteristic,
    /// invalid index list, unsupported degree/region combination, ...).
    InvalidParameter(String),
    /// A size or operation-count budget would be exceeded.
    BudgetExceeded(String),
    /// A construction is not available for the requested parameters
    /// (no Hadamard order, no equal-weight solution, ...).
    Infeasible(String),
    /// An internal consistency check failed; the result was discarded
    /// rather than released unverified.
    ConstructionCheck(String),
    /// A verification ran and did not pass.
    VerificationFailed(String),
    /// Numerical iteration did not converge.
    NonConvergence(String),
    /// File parsing failed at the given 1-based line.
    Parse { line: usize, message: String },
    /// Underlying I/O error.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(m) => write!(f, "invalid parameter: {m}"),
            Error::BudgetExceeded(m) => write!(f, "operation budget exceeded: {m}"),
            Error::Infeasible(m) => write!(f, "construction infeasible: {m}"),
            Error::ConstructionCheck(m) => write!(f, "construction self-check failed: {m}"),
            Error::VerificationFailed(m) => write!(f, "verification failed: {m}"),
            Error::NonConvergence(m) => write!(f, "iteration did not converge: {m}"),
            Error::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
            Error::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
