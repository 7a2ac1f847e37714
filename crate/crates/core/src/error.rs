use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("series of length {len} is too short for a difference of order {order}")]
    SeriesTooShort { len: usize, order: usize },

    #[error("expected a window of {expected} samples, got {found}")]
    WindowLength { expected: usize, found: usize },

    #[error("second-order observer step requires previous F history")]
    MissingHistory,

    #[error("influence matrix is rank deficient")]
    RankDeficient,

    #[error("adaptive scalar influence policy requires a single output, got {outputs}")]
    AdaptivePolicyDimension { outputs: usize },

    #[error("mass matrix is singular (determinant {determinant})")]
    SingularMassMatrix { determinant: f64 },

    #[error("simulation diverged: non-finite state")]
    Diverged,

    #[error("gain separation violated: {0}")]
    SeparationViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
