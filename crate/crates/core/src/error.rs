use thiserror::Error;

use crate::StatKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller supplied a parameter outside the operation's domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("statistic {stat} is not supported by {operation}")]
    UnsupportedStat {
        stat: StatKind,
        operation: &'static str,
    },

    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("{operation} requires {requirement}, found constant term {constant}")]
    ConstantTerm {
        operation: &'static str,
        requirement: &'static str,
        constant: String,
    },

    #[error("coefficient of z^{requested} requested from a series truncated at order {order}")]
    BeyondOrder { requested: usize, order: usize },

    /// A computation that must be exact by construction was not.
    ///
    /// Seeing this means an upstream construction is wrong; it is never the
    /// caller's fault.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("n = {n} exceeds the enumeration cap of {cap}")]
    ResourceCap { n: usize, cap: usize },

    #[error(
        "quadrature did not converge: estimate {estimate:e}, error {error:e}, tolerance {tolerance:e}"
    )]
    Quadrature {
        estimate: f64,
        error: f64,
        tolerance: f64,
    },

    #[error("{stat} density diverges at x = {x}")]
    Divergent { stat: StatKind, x: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// True for errors that signal a bug in a construction rather than bad
    /// input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}
