use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input was outside its documented range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// An operation precondition does not hold for the given input.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("element collection is empty")]
    EmptySet,

    /// A residual-radius comparison landed inside the numeric guard band of
    /// an approximately known lambda, so its sign cannot be certified.
    #[error("comparison inside the guard band (|value| <= 2^-64); supply a more precise lambda or perturb the radius")]
    GuardBand,

    #[error("lambda approximation too coarse: propagated error {error:e} exceeds the guard band")]
    InsufficientPrecision { error: f64 },

    #[error("{what} exceeds cap {cap}")]
    CapExceeded { what: String, cap: u64 },

    #[error("round refused: {0}")]
    RoundRefused(String),

    /// Logarithm of the ball volume does not fit in an `f64` after
    /// exponentiation.
    #[error("ball volume overflows f64 (ln V = {ln_volume})")]
    VolumeOverflow { ln_volume: f64 },

    #[error("rejection sampling gave up after {attempts} attempts")]
    RejectionCap { attempts: u64 },

    #[error("malformed instance: {0}")]
    Instance(String),

    /// An internal consistency check failed; this indicates a bug or a
    /// corrupted schedule rather than bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by the caller's input rather than by the
    /// implementation.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Internal(_) | Error::Io(_))
    }
}
