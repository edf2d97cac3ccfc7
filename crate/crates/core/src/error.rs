use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Construction-time rejection of malformed data.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The Krein signature is undefined at the origin and at spectral zeros.
    #[error("Krein signature undefined: {0}")]
    SignatureUndefined(String),

    /// A value fell outside the real domain of a closed-form expression.
    #[error("domain error: {0}")]
    Domain(String),

    /// Sturm-chain operations reject the zero polynomial.
    #[error("zero polynomial rejected where a Sturm chain is required")]
    ZeroPolynomial,

    /// The recurrence ladder is capped; nothing at desk scale needs more.
    #[error("family index {m} exceeds the supported cap {cap}")]
    IndexCap { m: usize, cap: usize },

    /// An exact verification pass found a counterexample.
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
