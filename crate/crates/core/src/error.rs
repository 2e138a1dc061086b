use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic {0} is even; only odd characteristic is supported")]
    EvenCharacteristic(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("extension degree must be at least 1")]
    ZeroDegree,

    #[error("field order {q} exceeds the configured limit {limit}")]
    FieldTooLarge { q: u128, limit: u64 },

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("element {value} is outside F_{q}")]
    ElementOutOfRange { value: u64, q: u32 },

    #[error("{0} requires a nonzero field element")]
    ZeroElement(&'static str),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("incompatible spaces: {0}")]
    SpaceMismatch(String),

    #[error("{what} needs {required} units of work but the budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        budget: u128,
    },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("wrong transform side: {0}")]
    WrongSide(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
