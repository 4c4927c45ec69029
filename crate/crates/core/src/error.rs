use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{value} lies outside the admissible range [{lo}, {hi}] for `{name}`")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("field `{0}` has no analytic gradient")]
    MissingGradient(String),

    #[error("dimension bisection did not converge: {0}")]
    NonConvergence(String),

    #[error("ill-conditioned difference quotient: {0}")]
    IllConditioned(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("state blew up after sample {last_valid}")]
    BlowUp { last_valid: usize },

    #[error("time {t} needs s = {required}, but the path only covers s <= {s_max}")]
    Coverage { t: f64, required: f64, s_max: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
