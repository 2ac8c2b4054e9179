use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    #[error("truncation too small: need validity {needed}, have {available}")]
    TruncationTooSmall { needed: i64, available: i64 },

    #[error("validity underflow: operator drops {drop} degrees from validity {validity}")]
    ValidityUnderflow { drop: i64, validity: i64 },

    #[error("variable space mismatch: ({0}, {1}) vs ({2}, {3})")]
    SpaceMismatch(usize, usize, usize, usize),

    #[error("signature mismatch")]
    SignatureMismatch,

    #[error("basis flavor mismatch")]
    FlavorMismatch,

    #[error("tensor is not symmetric")]
    NonSymmetric,

    #[error("polynomial is not harmonic in the {0} block")]
    NotHarmonic(&'static str),

    #[error("polynomial is not homogeneous in the {0} block")]
    NotHomogeneous(&'static str),

    #[error("series parameter {0} is a pole (zero or a negative integer)")]
    Pole(String),

    #[error("not a K-type of the module: {0}")]
    NotAKType(String),

    #[error("index violation: {0}")]
    IndexViolation(String),

    #[error("invalid module parameters: {0}")]
    InvalidParams(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
