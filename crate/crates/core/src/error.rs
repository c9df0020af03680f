use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field tower exhausted: {0}")]
    TowerExhausted(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("dimension {0} exceeds the configured maximum of {max}", max = crate::MAX_DIM)]
    DimensionTooLarge(usize),
    #[error("singular matrix: zero diagonal entry at {0}")]
    SingularMatrix(usize),
    #[error("series not invertible: leading coefficient {0}")]
    NotInvertible(String),
    #[error("ramification index {0} exceeds the supported maximum of 2")]
    RamificationLimit(u32),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("p and q are not coprime (gcd = {0})")]
    NotCoprime(String),
    #[error("case {case} is inadmissible for alpha = {alpha}: {reason}")]
    Inadmissible {
        case: i8,
        alpha: String,
        reason: String,
    },
    #[error("lift problem is not separable: {0}")]
    NotSeparable(String),
    #[error("semisimple root does not annihilate the diagonal polynomial: {0}")]
    NotARoot(String),
    #[error("polynomial is not square-free: {0}")]
    NotSquarefree(String),
    #[error("twist predicate mismatch: {0}")]
    PredicateMismatch(String),
    #[error("derivation does not preserve polynomials (q = {0} is not constant)")]
    NonPolynomialDerivation(String),
    #[error("structures are not over the same base: {0}")]
    Incompatible(String),
}

impl Error {
    /// Stable machine-readable tag, used in CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::TowerExhausted(_) => "TowerExhausted",
            Error::Parse(_) => "Parse",
            Error::InvalidInput(_) => "InvalidInput",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::DimensionTooLarge(_) => "DimensionTooLarge",
            Error::SingularMatrix(_) => "SingularMatrix",
            Error::NotInvertible(_) => "NotInvertible",
            Error::RamificationLimit(_) => "RamificationLimit",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::NotCoprime(_) => "NotCoprime",
            Error::Inadmissible { .. } => "Inadmissible",
            Error::NotSeparable(_) => "NotSeparable",
            Error::NotARoot(_) => "NotARoot",
            Error::NotSquarefree(_) => "NotSquarefree",
            Error::PredicateMismatch(_) => "PredicateMismatch",
            Error::NonPolynomialDerivation(_) => "NonPolynomialDerivation",
            Error::Incompatible(_) => "Incompatible",
        }
    }
}
