//! Synthetic benchmark: two-class 2-D Gaussian data, a logistic-regression
//! scorer trained by full-batch gradient descent, and a comparison of the
//! PR curve predicted for an imbalanced test set against the one actually
//! measured on it.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{
    auroc, class_counts, pr_view, rescale_pr, sweep, Label, Labelled, PrCurve, ScoredSample,
};
use crate::error::{Error, Result};
use crate::metrics::ClassRatio;

/// Class-conditional Gaussians for the two classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSpec {
    mean_pos: [f64; 2],
    mean_neg: [f64; 2],
    chol_pos: [[f64; 2]; 2],
    chol_neg: [[f64; 2]; 2],
    cov_pos: [[f64; 2]; 2],
    cov_neg: [[f64; 2]; 2],
    pub seed: u64,
}

impl GaussianSpec {
    pub fn new(
        mean_pos: [f64; 2],
        mean_neg: [f64; 2],
        cov_pos: [[f64; 2]; 2],
        cov_neg: [[f64; 2]; 2],
        seed: u64,
    ) -> Result<Self> {
        Ok(Self {
            mean_pos,
            mean_neg,
            chol_pos: cholesky(cov_pos)?,
            chol_neg: cholesky(cov_neg)?,
            cov_pos,
            cov_neg,
            seed,
        })
    }

    pub fn mean_pos(&self) -> [f64; 2] {
        self.mean_pos
    }

    pub fn mean_neg(&self) -> [f64; 2] {
        self.mean_neg
    }

    pub fn cov_pos(&self) -> [[f64; 2]; 2] {
        self.cov_pos
    }

    pub fn cov_neg(&self) -> [[f64; 2]; 2] {
        self.cov_neg
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

impl Default for GaussianSpec {
    /// Means `(+1, 0)` and `(-1, 0)` with identity covariances.
    fn default() -> Self {
        let eye = [[1.0, 0.0], [0.0, 1.0]];
        Self::new([1.0, 0.0], [-1.0, 0.0], eye, eye, 0).expect("identity is positive-definite")
    }
}

/// Lower Cholesky factor of a symmetric positive-definite 2x2 matrix.
fn cholesky(m: [[f64; 2]; 2]) -> Result<[[f64; 2]; 2]> {
    let finite = m.iter().flatten().all(|v| v.is_finite());
    let symmetric = (m[0][1] - m[1][0]).abs() <= 1e-12 * m[0][1].abs().max(m[1][0].abs()).max(1.0);
    if !finite || !symmetric || m[0][0] <= 0.0 {
        return Err(Error::BadCovariance(m));
    }
    let a = m[0][0].sqrt();
    let b = m[1][0] / a;
    let c2 = m[1][1] - b * b;
    if c2 <= 0.0 {
        return Err(Error::BadCovariance(m));
    }
    Ok([[a, 0.0], [b, c2.sqrt()]])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledPoint {
    pub x: [f64; 2],
    pub label: Label,
}

impl Labelled for LabeledPoint {
    fn label(&self) -> Label {
        self.label
    }
}

/// Draws exactly `n_pos` positives followed by `n_neg` negatives.
pub fn generate(spec: &GaussianSpec, n_pos: usize, n_neg: usize) -> Result<Vec<LabeledPoint>> {
    if n_pos == 0 {
        return Err(Error::EmptyClass("n_pos must be at least 1"));
    }
    if n_neg == 0 {
        return Err(Error::EmptyClass("n_neg must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut draw = |mean: [f64; 2], l: [[f64; 2]; 2], label: Label| {
        let z0: f64 = rng.sample(StandardNormal);
        let z1: f64 = rng.sample(StandardNormal);
        LabeledPoint {
            x: [
                mean[0] + l[0][0] * z0,
                mean[1] + l[1][0] * z0 + l[1][1] * z1,
            ],
            label,
        }
    };
    let mut out = Vec::with_capacity(n_pos + n_neg);
    for _ in 0..n_pos {
        out.push(draw(spec.mean_pos, spec.chol_pos, Label::Positive));
    }
    for _ in 0..n_neg {
        out.push(draw(spec.mean_neg, spec.chol_neg, Label::Negative));
    }
    Ok(out)
}

/// Linear scorer `w . x + b`; the score is the model's log odds.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct LogisticModel {
    pub weights: [f64; 2],
    pub bias: f64,
}

impl LogisticModel {
    pub fn score(&self, x: &[f64; 2]) -> f64 {
        self.weights[0] * x[0] + self.weights[1] * x[1] + self.bias
    }

    pub fn score_all(&self, data: &[LabeledPoint]) -> Vec<ScoredSample> {
        data.iter()
            .map(|p| ScoredSample::new(self.score(&p.x), p.label))
            .collect()
    }

    fn is_finite(&self) -> bool {
        self.weights.iter().all(|w| w.is_finite()) && self.bias.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub iterations: usize,
    pub l2: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.5,
            iterations: 300,
            l2: 0.0,
        }
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn sign(label: Label) -> f64 {
    if label.is_positive() {
        1.0
    } else {
        -1.0
    }
}

/// Mean log-loss plus `l2 / 2 * |w|^2`. The bias is not penalized.
pub fn log_loss(model: &LogisticModel, data: &[LabeledPoint], l2: f64) -> f64 {
    let n = data.len() as f64;
    let data_term: f64 = data
        .iter()
        .map(|p| softplus(-sign(p.label) * model.score(&p.x)))
        .sum::<f64>()
        / n;
    let w = model.weights;
    data_term + 0.5 * l2 * (w[0] * w[0] + w[1] * w[1])
}

/// Analytic gradient of [`log_loss`] as `(d/dw, d/db)`.
pub fn log_loss_gradient(model: &LogisticModel, data: &[LabeledPoint], l2: f64) -> ([f64; 2], f64) {
    let n = data.len() as f64;
    let (mut gw, mut gb) = ([0.0; 2], 0.0);
    for p in data {
        let y = sign(p.label);
        // d/ds softplus(-y s) = -y * sigmoid(-y s)
        let coef = -y * sigmoid(-y * model.score(&p.x));
        gw[0] += coef * p.x[0];
        gw[1] += coef * p.x[1];
        gb += coef;
    }
    (
        [
            gw[0] / n + l2 * model.weights[0],
            gw[1] / n + l2 * model.weights[1],
        ],
        gb / n,
    )
}

/// Full-batch gradient descent from the zero model. Returns the model and
/// the loss after each iteration.
pub fn train_logistic_with_history(
    data: &[LabeledPoint],
    config: &TrainConfig,
) -> Result<(LogisticModel, Vec<f64>)> {
    let (n_pos, n_neg) = class_counts(data);
    if n_pos == 0 {
        return Err(Error::EmptyClass("training data has no positives"));
    }
    if n_neg == 0 {
        return Err(Error::EmptyClass("training data has no negatives"));
    }
    if !(config.learning_rate.is_finite() && config.learning_rate > 0.0) {
        return Err(Error::InvalidParameter {
            name: "learning_rate",
            value: config.learning_rate,
        });
    }
    if !(config.l2.is_finite() && config.l2 >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "l2",
            value: config.l2,
        });
    }

    let mut model = LogisticModel::default();
    let mut history = Vec::with_capacity(config.iterations);
    for iteration in 0..config.iterations {
        let (gw, gb) = log_loss_gradient(&model, data, config.l2);
        model.weights[0] -= config.learning_rate * gw[0];
        model.weights[1] -= config.learning_rate * gw[1];
        model.bias -= config.learning_rate * gb;
        let loss = log_loss(&model, data, config.l2);
        if !loss.is_finite() || !model.is_finite() {
            return Err(Error::Diverged { iteration, loss });
        }
        history.push(loss);
    }
    Ok((model, history))
}

pub fn train_logistic(data: &[LabeledPoint], config: &TrainConfig) -> Result<LogisticModel> {
    train_logistic_with_history(data, config).map(|(m, _)| m)
}

/// Downsamples one class, without replacement, so that the positive to
/// negative ratio becomes `target` (the kept count is rounded to the
/// nearest integer). The other class is kept whole. Relative order of the
/// kept items is preserved.
pub fn subsample_to_ratio<T: Labelled + Clone>(
    items: &[T],
    target: ClassRatio,
    seed: u64,
) -> Result<Vec<T>> {
    let (n_pos, n_neg) = class_counts(items);
    let current = ClassRatio::from_counts(n_pos as u64, n_neg as u64)?;
    let unachievable = || Error::UnachievableRatio {
        target: target.value(),
        n_pos,
        n_neg,
    };

    let (thin, keep) = match current.value().partial_cmp(&target.value()) {
        Some(std::cmp::Ordering::Equal) => return Ok(items.to_vec()),
        Some(std::cmp::Ordering::Greater) => {
            (Label::Positive, (target.value() * n_neg as f64).round())
        }
        _ => (Label::Negative, (n_pos as f64 / target.value()).round()),
    };
    let available = if thin == Label::Positive {
        n_pos
    } else {
        n_neg
    };
    if keep < 1.0 || keep > available as f64 {
        return Err(unachievable());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = vec![false; available];
    for i in index::sample(&mut rng, available, keep as usize) {
        chosen[i] = true;
    }
    let mut k = 0;
    Ok(items
        .iter()
        .filter(|item| {
            if item.label() != thin {
                return true;
            }
            k += 1;
            chosen[k - 1]
        })
        .cloned()
        .collect())
}

/// Adds `delta` to every score. Shifting the scores moves the thresholds
/// but leaves the order, and so the swept curve, unchanged.
pub fn shift_scores(samples: &[ScoredSample], delta: f64) -> Vec<ScoredSample> {
    samples
        .iter()
        .map(|s| ScoredSample::new(s.score + delta, s.label))
        .collect()
}

/// `count` evenly spaced recall values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecallGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Default for RecallGrid {
    fn default() -> Self {
        Self {
            start: 0.05,
            stop: 0.95,
            count: 181,
        }
    }
}

impl RecallGrid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        let in_range = |v: f64| v > 0.0 && v <= 1.0;
        if !in_range(start) {
            return Err(Error::InvalidParameter {
                name: "grid start",
                value: start,
            });
        }
        if !in_range(stop) || stop < start {
            return Err(Error::InvalidParameter {
                name: "grid stop",
                value: stop,
            });
        }
        if count == 0 || (count == 1 && start != stop) {
            return Err(Error::InvalidParameter {
                name: "grid count",
                value: count as f64,
            });
        }
        Ok(Self { start, stop, count })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

/// Precision of the last vertex whose recall does not exceed `recall`.
/// Below the first vertex the first vertex's precision is used.
pub fn precision_at_recall(pr: &PrCurve, recall: f64) -> Option<f64> {
    let idx = pr.points.partition_point(|p| p.recall <= recall);
    let i = idx.saturating_sub(1);
    pr.points.get(i).map(|p| p.precision)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub recall_grid: Vec<f64>,
    pub predicted_precision: Vec<f64>,
    pub empirical_precision: Vec<f64>,
    pub mean_abs_gap: f64,
    pub max_abs_gap: f64,
}

impl ComparisonReport {
    /// Compares two PR curves on a recall grid by step lookup.
    pub fn compare(predicted: &PrCurve, empirical: &PrCurve, grid: &[f64]) -> Result<Self> {
        let lookup = |pr: &PrCurve| {
            grid.iter()
                .map(|&g| precision_at_recall(pr, g).ok_or(Error::EmptyCurve))
                .collect::<Result<Vec<f64>>>()
        };
        let predicted_precision = lookup(predicted)?;
        let empirical_precision = lookup(empirical)?;
        let gaps: Vec<f64> = predicted_precision
            .iter()
            .zip(&empirical_precision)
            .map(|(a, b)| (a - b).abs())
            .collect();
        let mean_abs_gap = if gaps.is_empty() {
            0.0
        } else {
            gaps.iter().sum::<f64>() / gaps.len() as f64
        };
        let max_abs_gap = gaps.iter().copied().fold(0.0, f64::max);
        Ok(Self {
            recall_grid: grid.to_vec(),
            predicted_precision,
            empirical_precision,
            mean_abs_gap,
            max_abs_gap,
        })
    }
}

/// Parameters of one predicted-vs-empirical PR comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig1Config {
    pub gaussian: GaussianSpec,
    pub train: TrainConfig,
    pub n_train_pos: usize,
    pub n_train_neg: usize,
    pub n_test_pos: usize,
    pub n_test_neg: usize,
    pub r_low: ClassRatio,
    pub grid: RecallGrid,
}

impl Default for Fig1Config {
    /// Balanced 5000/5000 test set, predicted and measured at r = 0.1.
    fn default() -> Self {
        Self {
            gaussian: GaussianSpec::default(),
            train: TrainConfig::default(),
            n_train_pos: 2000,
            n_train_neg: 2000,
            n_test_pos: 5000,
            n_test_neg: 5000,
            r_low: ClassRatio::new(0.1).expect("positive"),
            grid: RecallGrid::default(),
        }
    }
}

/// Everything produced by one benchmark run.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Run {
    pub model: LogisticModel,
    /// PR curve of the balanced test set at its own ratio.
    pub balanced: PrCurve,
    /// The balanced curve rescaled to `r_low`.
    pub predicted: PrCurve,
    /// PR curve measured on the subsampled test set.
    pub empirical: PrCurve,
    pub auroc_balanced: f64,
    pub auroc_subsampled: f64,
    pub report: ComparisonReport,
}

/// Independent seed for one pipeline stage (SplitMix64 finalizer).
fn stage_seed(seed: u64, stage: u64) -> u64 {
    let mut z = seed ^ stage.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Trains a scorer, sweeps a test set, predicts its PR curve at
/// `config.r_low`, then measures the PR curve on a test set actually
/// subsampled to `r_low` and compares the two. `config.gaussian.seed`
/// drives every random draw.
pub fn run_fig1(config: &Fig1Config) -> Result<Fig1Run> {
    let seed = config.gaussian.seed;
    let train = generate(
        &config.gaussian.with_seed(stage_seed(seed, 0)),
        config.n_train_pos,
        config.n_train_neg,
    )?;
    let model = train_logistic(&train, &config.train)?;

    let test = generate(
        &config.gaussian.with_seed(stage_seed(seed, 1)),
        config.n_test_pos,
        config.n_test_neg,
    )?;
    let scored = model.score_all(&test);
    let curve = sweep(&scored)?;
    let from_r = curve.empirical_ratio().ok_or(Error::EmptyCurve)?;
    let balanced = pr_view(&curve, from_r)?;
    let predicted = rescale_pr(&curve, from_r, config.r_low)?;

    let sub = subsample_to_ratio(&scored, config.r_low, stage_seed(seed, 2))?;
    let sub_curve = sweep(&sub)?;
    let sub_r = sub_curve.empirical_ratio().ok_or(Error::EmptyCurve)?;
    let empirical = pr_view(&sub_curve, sub_r)?;

    let report = ComparisonReport::compare(&predicted, &empirical, &config.grid.values())?;
    Ok(Fig1Run {
        model,
        balanced,
        predicted,
        empirical,
        auroc_balanced: auroc(&curve),
        auroc_subsampled: auroc(&sub_curve),
        report,
    })
}

/// Runs [`run_fig1`] once per seed, in parallel. Results are in seed order.
pub fn run_fig1_seeds(config: &Fig1Config, seeds: &[u64]) -> Result<Vec<Fig1Run>> {
    seeds
        .par_iter()
        .map(|&s| {
            let mut c = *config;
            c.gaussian.seed = s;
            run_fig1(&c)
        })
        .collect()
}
