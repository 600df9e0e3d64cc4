//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("mixed coefficient fields: {0} and {1}")]
    MixedFields(String, String),
    #[error("mixed ambient variable lists")]
    MixedAmbient,
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation hits a pole at lambda = {0}")]
    PoleAtValue(String),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("not divisible: remainder {remainder}")]
    NotDivisible { remainder: String },
    #[error("polynomial is not monic in {0}")]
    NotMonicInVariable(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown invariant {0}")]
    UnknownName(String),
    #[error("polynomial is not invariant: {0}")]
    NotInvariant(String),
    #[error("budget exceeded after {steps} steps")]
    BudgetExceeded { steps: usize },
    #[error("no element of the input set is a linear form")]
    NoLinearElement,
    #[error("computation infeasible: {0}")]
    Infeasible(String),
    #[error("subduction needs a homogeneous polynomial")]
    NonHomogeneousMix,
    #[error("lead-term relations incomplete at degree bound {bound}")]
    DegreeBoundExceeded { bound: u32 },
    #[error("unknown lemma {0}")]
    UnknownLemma(String),
    #[error("lemma does not apply: {0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
