use thiserror::Error;

use crate::rootcount::TransversalityCertificate;
use crate::semiring::Convention;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("convention mismatch: {0} vs {1}")]
    ConventionMismatch(Convention, Convention),
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has more rows ({rows}) than columns ({cols})")]
    TooManyRows { rows: usize, cols: usize },
    #[error("valuation of zero is undefined")]
    ZeroValuation,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("non-integral generator")]
    NonIntegral,
    #[error("complex is not pure")]
    NotPure,
    #[error("complex is not balanced")]
    NotBalanced,
    #[error("codimensions do not sum to the ambient dimension ({codim_sum} vs {ambient})")]
    NotComplementary { codim_sum: usize, ambient: usize },
    #[error("perturbation vector is not generic")]
    NonGenericPerturbation,
    #[error("no generic perturbation found after {0} attempts")]
    PerturbationExhausted(usize),
    #[error("lifting is not generic")]
    DegenerateLifting,
    #[error("expected {expected} polytopes in dimension {expected}, found {found}")]
    PolytopeCount { expected: usize, found: usize },
    #[error("system is not square: {equations} equations in {variables} variables")]
    NonSquare { equations: usize, variables: usize },
    #[error("base is not tropically transverse")]
    NotTransverse(Box<TransversalityCertificate>),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("cross-check failed: mixed volume {mixed_volume}, intersection number {intersection_number}")]
    CrossCheck {
        mixed_volume: String,
        intersection_number: String,
    },
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

impl Error {
    /// Attaches a location to a parse error; other variants pass through.
    pub fn at(self, location: impl Into<String>) -> Self {
        match self {
            Error::Parse { location: l, message } if l.is_empty() => Error::Parse {
                location: location.into(),
                message,
            },
            Error::Parse { location: l, message } => Error::Parse {
                location: format!("{}.{}", location.into(), l),
                message,
            },
            other => other,
        }
    }
}
