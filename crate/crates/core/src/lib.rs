//! Binary classifier evaluation at arbitrary class ratios.
//!
//! A classifier is summarized by its threshold-swept `(TPR, FPR)` curve,
//! which does not depend on how many positives and negatives the test set
//! holds. Precision, F-beta, PR and precision-recall-gain curves are then
//! computed at any ratio `r = P / N`, which also predicts how a PR curve
//! measured at one ratio looks at another.

pub mod cli;
pub mod curves;
pub mod error;
pub mod metrics;
pub mod synth;

pub use error::{Error, Result};
