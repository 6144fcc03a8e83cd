use thiserror::Error;

use crate::coord::{CoordId, JetSpace};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimensions n={n}, m={m}: both must be at least 1")]
    InvalidDims { n: usize, m: usize },

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("coordinate {coord} is out of range for n={n}, m={m}")]
    IndexOutOfRange { coord: String, n: usize, m: usize },

    #[error("binding for {coord} references coordinates outside {target}")]
    MixedSpace { coord: CoordId, target: JetSpace },

    #[error("coordinate {coord} does not belong to {space}")]
    NotInSpace { coord: CoordId, space: JetSpace },

    #[error("expression is not polynomial in the jet coordinates: {0}")]
    NotPolynomialInJets(String),

    #[error("expression is not polynomial: {0}")]
    NotPolynomial(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("evaluation left the domain: {0}")]
    EvalDomain(String),

    #[error("forms live on different spaces: {0} and {1}")]
    SpaceMismatch(JetSpace, JetSpace),

    #[error("form is not horizontal: contains covector d{0}")]
    NotHorizontal(CoordId),

    #[error("operation would leave the second-order jet space: {0}")]
    OrderExceeded(String),

    #[error("Lagrangian is not a kernel candidate: {0}")]
    NotInKernelCandidate(String),

    #[error("decomposition coefficients are not antisymmetric: {0}")]
    AntisymmetryViolated(String),

    #[error("form is not closed")]
    NotClosed,

    #[error("expected a form of degree {expected}, got degree {found}")]
    BadDegree { expected: usize, found: usize },

    #[error("bad arity: {0}")]
    BadArity(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Variant name, used as a stable error tag in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidDims { .. } => "InvalidDims",
            Error::Syntax { .. } => "SyntaxError",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::MixedSpace { .. } => "MixedSpace",
            Error::NotInSpace { .. } => "NotInSpace",
            Error::NotPolynomialInJets(_) => "NotPolynomialInJets",
            Error::NotPolynomial(_) => "NotPolynomial",
            Error::DivisionByZero => "DivisionByZero",
            Error::EvalDomain(_) => "EvalDomain",
            Error::SpaceMismatch(..) => "SpaceMismatch",
            Error::NotHorizontal(_) => "NotHorizontal",
            Error::OrderExceeded(_) => "OrderExceeded",
            Error::NotInKernelCandidate(_) => "NotInKernelCandidate",
            Error::AntisymmetryViolated(_) => "AntisymmetryViolated",
            Error::NotClosed => "NotClosed",
            Error::BadDegree { .. } => "BadDegree",
            Error::BadArity(_) => "BadArity",
            Error::InvalidConfig(_) => "InvalidConfig",
        }
    }
}
