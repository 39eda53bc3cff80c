use thiserror::Error;

/// Errors raised by the metric, curve and benchmark operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty class: {0}")]
    EmptyClass(&'static str),

    #[error("precision is undefined with no predicted positives (tpr = fpr = 0)")]
    UndefinedPrecision,

    #[error("F-beta is undefined when precision or recall is zero")]
    UndefinedF,

    #[error("gain is undefined at tpr = 0")]
    UndefinedGain,

    #[error("degenerate positive fraction {0}: must lie strictly inside (0, 1)")]
    DegenerateRatio(f64),

    #[error("invalid class ratio {0}: must be positive and finite")]
    InvalidRatio(f64),

    #[error("invalid operating point (tpr = {tpr}, fpr = {fpr}): rates must lie in [0, 1]")]
    InvalidOperatingPoint { tpr: f64, fpr: f64 },

    #[error("invalid {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("ratio mismatch: curve was measured at r = {empirical}, caller claims r = {claimed}")]
    RatioMismatch { claimed: f64, empirical: f64 },

    #[error("empty curve")]
    EmptyCurve,

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("non-finite score {0}")]
    NonFiniteScore(f64),

    #[error("covariance matrix is not symmetric positive-definite: {0:?}")]
    BadCovariance([[f64; 2]; 2]),

    #[error("training diverged at iteration {iteration} (loss = {loss})")]
    Diverged { iteration: usize, loss: f64 },

    #[error("ratio r = {target} is unachievable from {n_pos} positives and {n_neg} negatives")]
    UnachievableRatio {
        target: f64,
        n_pos: usize,
        n_neg: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
