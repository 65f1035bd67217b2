use std::fmt;

use thiserror::Error;

use crate::exactmath::QPoly;

/// A squarefree modulus turned out to be reducible.
///
/// Raised whenever arithmetic modulo a factor handle meets a zero divisor.
/// The factors are monic and multiply back to the old modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitEvent {
    pub factors: Vec<QPoly>,
}

impl SplitEvent {
    pub fn new(factors: Vec<QPoly>) -> Self {
        debug_assert!(!factors.is_empty());
        debug_assert!(factors.iter().all(|f| f.degree().unwrap_or(0) >= 1));
        SplitEvent { factors }
    }
}

impl fmt::Display for SplitEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|p| p.display("t").to_string()).collect();
        write!(f, "modulus splits as ({})", parts.join(")*("))
    }
}

#[derive(Clone, Debug, Error)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("zero divisor found: {0}")]
    Split(SplitEvent),
    #[error("zero operator has no order")]
    ZeroOperator,
    #[error("not an operator: {0}")]
    NotAnOperator(String),
    #[error("irregular singularity at {point}")]
    IrregularSingularity { point: String },
    #[error("unsupported exponent at {point}: {detail}")]
    UnsupportedExponent { point: String, detail: String },
    #[error("cannot bound the Wronskian at {point} within {terms} terms")]
    CannotBoundWronskian { point: String, terms: usize },
    #[error("invalid iota policy: {0}")]
    InvalidPolicy(String),
    #[error("truncation too short: {0}")]
    TruncationTooShort(String),
    #[error("series expanded at different points")]
    PointMismatch,
    #[error("elements are linearly dependent")]
    NotABasis,
    #[error("bad denominator shape: {0}")]
    BadDenominatorShape(String),
    #[error("hermite reduction obstructed at m = {m}")]
    ReductionObstruction { m: usize },
}

impl From<SplitEvent> for Error {
    fn from(s: SplitEvent) -> Self {
        Error::Split(s)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
