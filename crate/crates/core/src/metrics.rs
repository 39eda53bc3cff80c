//! Pointwise classifier metrics expressed through the ratio-invariant
//! operating point `(TPR, FPR)` and the class ratio `r = P / N`.
//!
//! Every quantity that depends on class imbalance (precision, F-beta,
//! recall gain) takes a [`ClassRatio`] explicitly, so the same operating
//! point can be evaluated at any test-set composition.

use crate::error::{Error, Result};

/// Confusion table at a single decision threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fn_: u64,
    pub fp: u64,
    pub tn: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, fn_: u64, fp: u64, tn: u64) -> Self {
        Self { tp, fn_, fp, tn }
    }

    /// Number of actual positives, `TP + FN`.
    pub fn positives(&self) -> u64 {
        self.tp + self.fn_
    }

    /// Number of actual negatives, `FP + TN`.
    pub fn negatives(&self) -> u64 {
        self.fp + self.tn
    }

    /// The empirical class ratio `P / N` of the table.
    pub fn ratio(&self) -> Result<ClassRatio> {
        ClassRatio::from_counts(self.positives(), self.negatives())
    }
}

/// A `(TPR, FPR)` pair. Recall is the same quantity as TPR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    tpr: f64,
    fpr: f64,
}

impl OperatingPoint {
    pub fn new(tpr: f64, fpr: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&tpr) || !(0.0..=1.0).contains(&fpr) {
            return Err(Error::InvalidOperatingPoint { tpr, fpr });
        }
        Ok(Self { tpr, fpr })
    }

    pub fn tpr(&self) -> f64 {
        self.tpr
    }

    pub fn fpr(&self) -> f64 {
        self.fpr
    }

    pub fn recall(&self) -> f64 {
        self.tpr
    }
}

/// Ratio of positives to negatives, `r = P / N = pi / (1 - pi)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ClassRatio(f64);

impl ClassRatio {
    pub fn new(r: f64) -> Result<Self> {
        if r.is_finite() && r > 0.0 {
            Ok(Self(r))
        } else {
            Err(Error::InvalidRatio(r))
        }
    }

    /// Builds the ratio from the positive fraction `pi = P / (P + N)`.
    pub fn from_pi(pi: f64) -> Result<Self> {
        if !(pi > 0.0 && pi < 1.0) {
            return Err(Error::DegenerateRatio(pi));
        }
        Self::new(pi / (1.0 - pi))
    }

    pub fn from_counts(n_pos: u64, n_neg: u64) -> Result<Self> {
        if n_pos == 0 {
            return Err(Error::EmptyClass("no positives"));
        }
        if n_neg == 0 {
            return Err(Error::EmptyClass("no negatives"));
        }
        Self::new(n_pos as f64 / n_neg as f64)
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    /// Positive fraction `pi = r / (1 + r)`.
    pub fn pi(&self) -> f64 {
        self.0 / (1.0 + self.0)
    }
}

/// Precision gain and recall gain of one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainPoint {
    pub rec_gain: f64,
    pub prec_gain: f64,
}

/// True and false positive rates of a confusion table.
pub fn rates(c: &ConfusionCounts) -> Result<OperatingPoint> {
    let p = c.positives();
    let n = c.negatives();
    if p == 0 {
        return Err(Error::EmptyClass("no positives"));
    }
    if n == 0 {
        return Err(Error::EmptyClass("no negatives"));
    }
    OperatingPoint::new(c.tp as f64 / p as f64, c.fp as f64 / n as f64)
}

/// Precision of `op` on a population with class ratio `ratio`:
/// `TPR / (TPR + FPR / r)`.
pub fn precision_at_ratio(op: OperatingPoint, ratio: ClassRatio) -> Result<f64> {
    if op.tpr == 0.0 && op.fpr == 0.0 {
        return Err(Error::UndefinedPrecision);
    }
    Ok(op.tpr / (op.tpr + op.fpr / ratio.value()))
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "beta",
            value: beta,
        })
    }
}

/// F-beta as the weighted harmonic mean of precision and recall, with
/// recall weighted by `beta^2`.
pub fn f_beta_from_pr(prec: f64, rec: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if !(prec > 0.0 && rec > 0.0) {
        return Err(Error::UndefinedF);
    }
    let b2 = beta * beta;
    let inv = (1.0 / (1.0 + b2)) / prec + (b2 / (1.0 + b2)) / rec;
    Ok(1.0 / inv)
}

/// F-beta written directly in terms of the rates and the class ratio:
/// `(1 + beta^2) TPR / (TPR + FPR / r + beta^2)`.
pub fn f_beta_from_rates(op: OperatingPoint, ratio: ClassRatio, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if op.tpr == 0.0 {
        return Err(Error::UndefinedF);
    }
    let b2 = beta * beta;
    Ok((1.0 + b2) * op.tpr / (op.tpr + op.fpr / ratio.value() + b2))
}

/// Precision gain `1 - FPR / TPR`. Does not depend on the class ratio.
pub fn precision_gain(op: OperatingPoint) -> Result<f64> {
    if op.tpr == 0.0 {
        return Err(Error::UndefinedGain);
    }
    Ok(1.0 - op.fpr / op.tpr)
}

/// Recall gain `1 + r (1 - 1 / TPR)`.
pub fn recall_gain(op: OperatingPoint, ratio: ClassRatio) -> Result<f64> {
    if op.tpr == 0.0 {
        return Err(Error::UndefinedGain);
    }
    Ok(1.0 + ratio.value() * (1.0 - 1.0 / op.tpr))
}

/// Gain of a precision or recall value relative to the positive fraction:
/// `(x - pi) / ((1 - pi) x)`. This is the defining form of both gains.
pub fn gain_from_fraction(x: f64, pi: f64) -> Result<f64> {
    if !(pi > 0.0 && pi < 1.0) {
        return Err(Error::DegenerateRatio(pi));
    }
    if x <= 0.0 {
        return Err(Error::UndefinedGain);
    }
    Ok((x - pi) / ((1.0 - pi) * x))
}

pub fn gain_point(op: OperatingPoint, ratio: ClassRatio) -> Result<GainPoint> {
    Ok(GainPoint {
        rec_gain: recall_gain(op, ratio)?,
        prec_gain: precision_gain(op)?,
    })
}
