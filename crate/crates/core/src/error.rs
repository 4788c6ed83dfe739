use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("field lives on a different basis than the operator")]
    BasisMismatch,

    #[error("root finding did not converge: {0}")]
    NoConvergence(String),

    /// The exact cubic gain flow has a finite-time singularity; the requested
    /// step reaches past it.
    #[error("blow-up: step {dt} exceeds the admissible bound {bound}")]
    BlowUp { dt: f64, bound: f64 },

    #[error("non-finite value in state")]
    NonFinite,

    #[error("ode integrator: {0}")]
    Ode(#[from] crate::ode::OdeError),

    #[error("matrix exponential overflow (norm {0:e})")]
    ExpmOverflow(f64),

    #[error("singular linear system")]
    Singular,

    #[error("t_final = {t_final} is not an integer multiple of dt = {dt}")]
    NonIntegerSteps { t_final: f64, dt: f64 },

    #[error("need at least {needed} points inside the fit window, found {found}")]
    InsufficientPoints { needed: usize, found: usize },

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),

    #[error("{0}")]
    Config(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
