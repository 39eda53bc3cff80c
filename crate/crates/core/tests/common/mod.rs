//! Independent reference implementations used by the integration tests.
//! None of them goes through the threshold sweep.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ratiopr::curves::{Label, ScoredSample};
use ratiopr::metrics::OperatingPoint;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Relative difference with a floor of 1 on the scale, for quantities
/// that may cross zero.
pub fn rel_diff_floor(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Random labelled scores with at least one sample of each class. When
/// `tied` is set, scores are drawn from a handful of values.
pub fn random_samples(rng: &mut ChaCha8Rng, n: usize, tied: bool) -> Vec<ScoredSample> {
    assert!(n >= 2);
    let levels = rng.random_range(2..8);
    let mut out: Vec<ScoredSample> = (0..n)
        .map(|_| {
            let label = if rng.random_bool(0.4) {
                Label::Positive
            } else {
                Label::Negative
            };
            let shift = if label.is_positive() { 0.5 } else { 0.0 };
            let score = if tied {
                rng.random_range(0..levels) as f64 / 4.0 + shift
            } else {
                rng.random::<f64>() * 3.0 - 1.5 + shift
            };
            ScoredSample::new(score, label)
        })
        .collect();
    out[0].label = Label::Positive;
    out[1].label = Label::Negative;
    out
}

/// Mean over positives of the precision at the threshold equal to that
/// positive's score (ties included), found by scanning every sample.
pub fn brute_force_average_precision(samples: &[ScoredSample]) -> f64 {
    let positives: Vec<f64> = samples
        .iter()
        .filter(|s| s.label.is_positive())
        .map(|s| s.score)
        .collect();
    let total: f64 = positives
        .iter()
        .map(|&t| {
            let tp = samples
                .iter()
                .filter(|s| s.label.is_positive() && s.score >= t)
                .count();
            let fp = samples
                .iter()
                .filter(|s| !s.label.is_positive() && s.score >= t)
                .count();
            tp as f64 / (tp + fp) as f64
        })
        .sum();
    total / positives.len() as f64
}

/// Mann-Whitney U over all positive/negative pairs, ties counted half,
/// normalized to [0, 1].
pub fn mann_whitney_auc(samples: &[ScoredSample]) -> f64 {
    let pos: Vec<f64> = samples
        .iter()
        .filter(|s| s.label.is_positive())
        .map(|s| s.score)
        .collect();
    let neg: Vec<f64> = samples
        .iter()
        .filter(|s| !s.label.is_positive())
        .map(|s| s.score)
        .collect();
    let mut u = 0.0;
    for &p in &pos {
        for &n in &neg {
            if p > n {
                u += 1.0;
            } else if p == n {
                u += 0.5;
            }
        }
    }
    u / (pos.len() * neg.len()) as f64
}

/// `(tp, fp)` when everything scoring at least `t` is called positive.
pub fn counts_at(samples: &[ScoredSample], t: f64) -> (usize, usize) {
    let tp = samples
        .iter()
        .filter(|s| s.label.is_positive() && s.score >= t)
        .count();
    let fp = samples
        .iter()
        .filter(|s| !s.label.is_positive() && s.score >= t)
        .count();
    (tp, fp)
}

/// Random valid rate curve without recorded sample sizes.
pub fn random_curve_points(rng: &mut ChaCha8Rng, inner: usize) -> Vec<OperatingPoint> {
    let mut t: Vec<f64> = (0..inner).map(|_| rng.random::<f64>()).collect();
    let mut f: Vec<f64> = (0..inner).map(|_| rng.random::<f64>()).collect();
    t.sort_by(f64::total_cmp);
    f.sort_by(f64::total_cmp);
    let mut pts = vec![OperatingPoint::new(0.0, 0.0).unwrap()];
    pts.extend(
        t.iter()
            .zip(&f)
            .map(|(&t, &f)| OperatingPoint::new(t, f).unwrap()),
    );
    pts.push(OperatingPoint::new(1.0, 1.0).unwrap());
    pts
}

/// Log-uniform ratio in `[lo, hi]`.
pub fn random_ratio(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random::<f64>() * (hi.ln() - lo.ln()) + lo.ln()).exp()
}
