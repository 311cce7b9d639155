use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An intermediate quantity became infinite or NaN.
    #[error("numerical overflow: a non-finite intermediate value was produced")]
    Overflow,

    /// Two approximations are closer than the collision threshold.
    #[error("approximations {first} and {second} collided (distance {distance:e})")]
    Collision {
        first: usize,
        second: usize,
        distance: f64,
    },

    /// The bracketed denominator of an update vanished.
    #[error("singular denominator while updating approximation {index}")]
    SingularDenominator { index: usize },

    /// The polynomial value at an approximation is indistinguishable from zero.
    #[error("residual at approximation {index} is zero to working accuracy")]
    ResidualZero { index: usize },

    /// The operation needs at least two distinct roots.
    #[error("root system has a single root; separation is undefined")]
    DegenerateSystem,

    /// Not enough usable data to estimate a convergence order.
    #[error("insufficient data for order estimation")]
    InsufficientData,

    /// Input violates a documented invariant.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
