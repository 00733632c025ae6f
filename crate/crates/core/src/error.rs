use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} outside supported range 1..=2147483647")]
    ModulusOutOfRange(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("argument `{0}` must be positive")]
    ZeroArgument(&'static str),

    #[error("closure exceeded the cap of {cap} elements ({partial} elements found)")]
    CapExceeded { cap: usize, partial: usize },

    #[error("matrix is not invertible modulo {modulus}")]
    NotInvertible { modulus: u64 },

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("isogeny is not equivariant for generator {index}: {detail}")]
    NotEquivariant { index: usize, detail: String },

    #[error("exactness failure ({reason}); witness {witness:?}")]
    NotExact { reason: String, witness: Vec<u64> },

    #[error("theorem check failed: {0}")]
    TheoremViolation(String),
}

impl Error {
    /// True for errors that indicate a computed counterexample to a proved
    /// statement, as opposed to bad input.
    pub fn is_theorem_violation(&self) -> bool {
        matches!(self, Error::TheoremViolation(_) | Error::NotExact { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
