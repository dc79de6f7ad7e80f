use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("structure constants are not antisymmetric at ({i}, {j}, {k}): residual {residual:e}")]
    NotAntisymmetric {
        i: usize,
        j: usize,
        k: usize,
        residual: f64,
    },

    #[error("structure constant index ({i}, {j}, {k}) invalid: {reason}")]
    BadTriple {
        i: usize,
        j: usize,
        k: usize,
        reason: &'static str,
    },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("malformed decomposition: {0}")]
    Decomposition(String),

    #[error("{what} is not symmetric positive definite")]
    NotPositiveDefinite { what: &'static str },

    #[error("{0} is singular")]
    Singular(&'static str),

    #[error("exponent m = {0} is not allowed (m must avoid 0 and -1)")]
    InvalidExponent(f64),

    #[error("defining vector violates the norm bound: sqrt<X,X> = {norm} >= 1")]
    NormBound { norm: f64 },

    #[error("defining vector must be nonzero and lie in m")]
    BadDefiningVector,

    #[error("outside the cone beta > 0: beta = {beta:e}")]
    OutsideCone { beta: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("vectors are linearly dependent")]
    Dependent,

    #[error("degenerate flag: denominator {denominator:e}")]
    DegenerateFlag { denominator: f64 },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("sampling failed: {0}")]
    Sampling(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
