use thiserror::Error;

/// Errors raised by the engine.
///
/// Mathematical failures (a residual that is not zero, a diagram that does
/// not commute) are reported through return values, not through this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("monomial {monomial} is outside the cone of algebra `{algebra}`")]
    ConeViolation { algebra: String, monomial: String },
    #[error("cannot raise non-monomial `{0}` to a negative power")]
    NotInvertible(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("algebra mismatch: expected `{expected}`, got `{got}`")]
    AlgebraMismatch { expected: String, got: String },
    #[error("signature splice mismatch: {0}")]
    SpliceMismatch(String),
    #[error("slot linearity violated: {0}")]
    NonLinear(String),
    #[error("truncation order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("requested order {requested} exceeds truncation order {available}")]
    OrderExceeded { requested: usize, available: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("not a biderivation: {0}")]
    NotBiderivation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
