use thiserror::Error;

/// Errors raised by the exact-math kernel and the layers built on it.
///
/// Every variant names the module that raised it so front ends can report a
/// machine-readable category without parsing messages.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{module}: domain error: {message}")]
    Domain { module: &'static str, message: String },

    #[error("{module}: precondition failed: {message}")]
    Precondition { module: &'static str, message: String },

    #[error("hensel lifting failed: {0}")]
    Lifting(String),

    #[error("polynomial {0} is reducible over Q")]
    Reducible(String),

    #[error("irreducibility not certified for {0}")]
    IrreducibilityNotCertified(String),

    #[error("prime {ell} divides the index [O_F : Z[theta]]; supply a different generator")]
    NotMaximalOrder { ell: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("{module}: infinite valuation (element is zero)")]
    InfiniteValuation { module: &'static str },

    #[error("{module}: precision exhausted: {message}")]
    PrecisionExhausted { module: &'static str, message: String },

    #[error("{module}: search exhausted: {message}")]
    SearchExhausted { module: &'static str, message: String },

    #[error("{module}: unsupported configuration: {message}")]
    Unsupported { module: &'static str, message: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{module}: internal error: {message}")]
    Internal { module: &'static str, message: String },
}

impl Error {
    pub fn domain(module: &'static str, message: impl Into<String>) -> Self {
        Error::Domain { module, message: message.into() }
    }

    pub fn precondition(module: &'static str, message: impl Into<String>) -> Self {
        Error::Precondition { module, message: message.into() }
    }

    pub fn internal(module: &'static str, message: impl Into<String>) -> Self {
        Error::Internal { module, message: message.into() }
    }

    /// Short machine-readable category used by the CLI.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::Domain { .. } | Error::DivisionByZero | Error::InfiniteValuation { .. } => {
                "domain"
            }
            Error::Precondition { .. }
            | Error::NotMaximalOrder { .. }
            | Error::Reducible(_)
            | Error::IrreducibilityNotCertified(_)
            | Error::Unsupported { .. } => "precondition",
            Error::Lifting(_) => "lifting",
            Error::PrecisionExhausted { .. } | Error::SearchExhausted { .. } => "exhausted",
            Error::Internal { .. } => "internal",
        }
    }

    /// Module that raised the error, when known.
    pub fn module(&self) -> &'static str {
        match self {
            Error::Domain { module, .. }
            | Error::Precondition { module, .. }
            | Error::InfiniteValuation { module }
            | Error::PrecisionExhausted { module, .. }
            | Error::SearchExhausted { module, .. }
            | Error::Unsupported { module, .. }
            | Error::Internal { module, .. } => module,
            Error::Lifting(_) => "exactmath",
            Error::Reducible(_) | Error::IrreducibilityNotCertified(_) | Error::DivisionByZero => {
                "numberfield"
            }
            Error::NotMaximalOrder { .. } => "idealtheory",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
