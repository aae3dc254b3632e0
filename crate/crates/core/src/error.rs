use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("truncation order {order} exceeds the maximum of {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("divisor has near-zero constant term (|b0| = {magnitude:e})")]
    DivisionBySingularSeries { magnitude: f64 },

    #[error("real power needs a base with constant term 1, got {re}{im:+}i")]
    PowBaseNotUnit { re: f64, im: f64 },

    #[error("inner series of a composition must vanish at 0 (|c0| = {magnitude:e})")]
    ComposeNotLocal { magnitude: f64 },

    #[error("series is not normalized (needs f(0) = 0 and f'(0) = 1)")]
    NotNormalized,

    #[error("Fibonacci index {n} is beyond the supported range 0..={max}")]
    FibOverflow { n: usize, max: usize },

    #[error("p̃ is singular near z = {re}{im:+}i (|denominator| = {magnitude:e})")]
    PoleProximity { re: f64, im: f64, magnitude: f64 },

    #[error("invalid Carathéodory measure: {0}")]
    InvalidMeasure(String),

    #[error("λ ≥ 1 is required, got λ = {0}")]
    LambdaOutOfRange(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
