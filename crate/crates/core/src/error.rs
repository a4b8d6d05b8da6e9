use thiserror::Error;

use crate::brauer::AxiomViolation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside the domain of an operation (valuation of zero, non-prime, bad flag, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Classes or motives from different field models were combined.
    #[error("model mismatch: {0}")]
    Model(String),

    /// An exact integer result does not fit in 64 bits.
    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    /// An abstract index table failed one or more axioms.
    #[error("index table rejected: {}", format_violations(.0))]
    InvalidIndexTable(Vec<AxiomViolation>),

    /// A proven identity failed at runtime. Always a bug or a corrupt model.
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

fn format_violations(violations: &[AxiomViolation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
