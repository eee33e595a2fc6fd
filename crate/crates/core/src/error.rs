use thiserror::Error;

use crate::ring::RingSpec;

/// Errors produced by the toolkit.
///
/// Mathematically negative answers (an identity that fails, an infeasible
/// system) are values, never errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a partial order: {0}")]
    NotPartialOrder(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("duplicate element name `{0}`")]
    DuplicateElement(String),

    #[error("poset has {size} elements, cap is {cap}")]
    PosetTooLarge { size: usize, cap: usize },

    #[error("empty interval request: `{0}` is not below `{1}`")]
    EmptyInterval(String, String),

    #[error("`{0}` is not below or equal to `{1}`")]
    NotComparable(String, String),

    #[error("restriction needs `{0}` strictly below `{1}`")]
    NotStrictlyBelow(String, String),

    #[error("operands live over different posets")]
    PosetMismatch,

    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(RingSpec, RingSpec),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid ring literal `{0}` (expected int, rat or zmod:m with m >= 2)")]
    InvalidRing(String),

    #[error("invalid scalar `{literal}` for ring {ring}")]
    InvalidScalar { literal: String, ring: RingSpec },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{what} needs {needed} evaluations, guard is {limit}")]
    GuardExceeded {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// True for resource-guard failures, which carry no mathematical verdict.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::GuardExceeded { .. } | Error::PosetTooLarge { .. })
    }
}
