use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid length: {0}")]
    InvalidLength(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(usize, usize),
    #[error("undefined: {0}")]
    Undefined(String),
    #[error("not a unit of the field: {0}")]
    NotAUnit(String),
    #[error("2 is not a primitive root modulo {0}")]
    HypothesisViolated(usize),
    #[error("invalid construction parameters: {0}")]
    InvalidParams(String),
    #[error("construction produced a code that is not self-dual: {0}")]
    ConstructionBug(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("incomplete coverage: {0}")]
    IncompleteCoverage(String),
    #[error("code is doubly even and has no proper shadow")]
    NoShadow,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("infeasible constraints: {0}")]
    Infeasible(String),
    #[error("underdetermined: {0}")]
    NeedsMoreConstraints(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
