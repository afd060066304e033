use thiserror::Error;

/// Errors raised by the numeric routines.
///
/// Every variant names the constraint that was violated so callers (and the
/// CLI) can surface it verbatim.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("validity error: {0}")]
    Validity(String),

    #[error("constraint error: {0}")]
    Constraint(String),

    #[error("root bracketing failed: {0}")]
    Bracket(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("infeasible configuration: {0}")]
    Infeasible(String),

    #[error("too close to a pole at {re}{im:+}i (distance {distance:e})")]
    PoleProximity { re: f64, im: f64, distance: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validity(msg: impl Into<String>) -> Self {
        Error::Validity(msg.into())
    }

    pub(crate) fn constraint(msg: impl Into<String>) -> Self {
        Error::Constraint(msg.into())
    }
}
