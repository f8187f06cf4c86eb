use thiserror::Error;

use crate::field::FieldSpec;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {size} exceeds cap {cap}")]
    SizeCapExceeded { size: u64, cap: u64 },
    #[error("no embedding from {from:?} into {to:?}")]
    NoEmbedding { from: FieldSpec, to: FieldSpec },
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("bad group table: {0}")]
    BadGroupTable(String),
    #[error("span still growing at dimension cap {cap}")]
    DimensionCapExceeded { cap: usize },
    #[error("subspace is not a two-sided ideal")]
    NotAnIdeal,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("enumeration of {count} candidates exceeds cap {cap}")]
    EnumerationCapExceeded { count: u64, cap: u64 },
    #[error("intertwiner search space of size {size} exceeds cap; undecided")]
    SearchCapExceeded { size: u64 },
    #[error("no splitting representation over extensions of degree <= {bound}")]
    NotFoundWithinBound { bound: u32 },
    #[error("GMA axiom failure: {0}")]
    GmaAxiomFailure(String),
    #[error("{count} points exceed point cap {cap}")]
    PointCapExceeded { count: u64, cap: u64 },
    #[error("pseudorepresentation does not occur in the report")]
    UnknownPseudoRep,
    #[error("residual characters coincide; not multiplicity free")]
    NotMultiplicityFree,
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("unsupported dimension {0}")]
    DimensionUnsupported(usize),
    #[error("kernel search over {size} points exceeds cap")]
    KernelSearchCapExceeded { size: u64 },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code for structured error output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::SizeCapExceeded { .. } => "SizeCapExceeded",
            Error::NoEmbedding { .. } => "NoEmbedding",
            Error::VariableMismatch(_) => "VariableMismatch",
            Error::BadGroupTable(_) => "BadGroupTable",
            Error::DimensionCapExceeded { .. } => "DimensionCapExceeded",
            Error::NotAnIdeal => "NotAnIdeal",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::EnumerationCapExceeded { .. } => "EnumerationCapExceeded",
            Error::SearchCapExceeded { .. } => "SearchCapExceeded",
            Error::NotFoundWithinBound { .. } => "NotFoundWithinBound",
            Error::GmaAxiomFailure(_) => "GmaAxiomFailure",
            Error::PointCapExceeded { .. } => "PointCapExceeded",
            Error::UnknownPseudoRep => "UnknownPseudoRep",
            Error::NotMultiplicityFree => "NotMultiplicityFree",
            Error::HypothesisViolation(_) => "HypothesisViolation",
            Error::DimensionUnsupported(_) => "DimensionUnsupported",
            Error::KernelSearchCapExceeded { .. } => "KernelSearchCapExceeded",
            Error::Schema(_) => "SchemaError",
            Error::Parse(_) => "ParseError",
        }
    }
}
