use thiserror::Error;

/// Errors raised by the library. The CLI maps every variant to exit code 1.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over {0}")]
    Reducible(String),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("field too large: {0}")]
    FieldTooLarge(String),
    #[error("embeddings do not compose: {0}")]
    Mismatch(String),
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: String, found: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace is not contained in the ambient subspace")]
    NotContained,
    #[error("window {window} is below the exactness bound {required} (m = {m}, n = {n})")]
    WindowTooSmall {
        window: usize,
        required: usize,
        m: usize,
        n: usize,
    },
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("invalid flow spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
