//! Threshold sweeps and the curves derived from them.
//!
//! A [`RateCurve`] holds only `(TPR, FPR)` vertices, which do not depend on
//! the class ratio. ROC, PR and PRG curves are views of it: the ROC view
//! needs nothing else, while the PR and PRG views are materialized at an
//! explicit [`ClassRatio`]. Predicting a PR curve at another ratio is
//! therefore just another view of the same vertices.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::metrics::{
    f_beta_from_rates, gain_point, precision_at_ratio, ClassRatio, GainPoint, OperatingPoint,
};

/// Relative tolerance when checking a claimed ratio against the one a
/// curve was measured at.
pub const RATIO_MATCH_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }
}

/// Anything carrying a ground-truth label.
pub trait Labelled {
    fn label(&self) -> Label;
}

/// One test point: a classifier score (higher means more positive) and
/// its true label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredSample {
    pub score: f64,
    pub label: Label,
}

impl ScoredSample {
    pub fn new(score: f64, label: Label) -> Self {
        Self { score, label }
    }

    pub fn positive(score: f64) -> Self {
        Self::new(score, Label::Positive)
    }

    pub fn negative(score: f64) -> Self {
        Self::new(score, Label::Negative)
    }
}

impl Labelled for ScoredSample {
    fn label(&self) -> Label {
        self.label
    }
}

/// Counts positives and negatives in a labelled collection.
pub fn class_counts<T: Labelled>(items: &[T]) -> (usize, usize) {
    let pos = items.iter().filter(|s| s.label().is_positive()).count();
    (pos, items.len() - pos)
}

/// Ordered operating points from a threshold sweep, anchored at `(0, 0)`
/// and `(1, 1)`, with both rates non-decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct RateCurve {
    points: Vec<OperatingPoint>,
    sizes: Option<(u64, u64)>,
}

impl RateCurve {
    /// Builds a curve from explicit vertices. The vertices must start at
    /// `(0, 0)`, end at `(1, 1)` and be non-decreasing in both rates.
    pub fn from_points(points: Vec<OperatingPoint>) -> Result<Self> {
        Self::validate(&points)?;
        Ok(Self {
            points,
            sizes: None,
        })
    }

    /// Like [`RateCurve::from_points`], also recording the number of
    /// positives and negatives the vertices were measured on.
    pub fn with_sizes(points: Vec<OperatingPoint>, n_pos: u64, n_neg: u64) -> Result<Self> {
        Self::validate(&points)?;
        ClassRatio::from_counts(n_pos, n_neg)?;
        Ok(Self {
            points,
            sizes: Some((n_pos, n_neg)),
        })
    }

    fn validate(points: &[OperatingPoint]) -> Result<()> {
        let (first, last) = match (points.first(), points.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err(Error::EmptyCurve),
        };
        if (first.tpr(), first.fpr()) != (0.0, 0.0) {
            return Err(Error::InvalidCurve("first vertex must be (0, 0)".into()));
        }
        if (last.tpr(), last.fpr()) != (1.0, 1.0) {
            return Err(Error::InvalidCurve("last vertex must be (1, 1)".into()));
        }
        for (i, w) in points.windows(2).enumerate() {
            if w[1].tpr() < w[0].tpr() || w[1].fpr() < w[0].fpr() {
                return Err(Error::InvalidCurve(format!(
                    "rates decrease between vertices {} and {}",
                    i,
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn points(&self) -> &[OperatingPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn n_pos(&self) -> Option<u64> {
        self.sizes.map(|s| s.0)
    }

    pub fn n_neg(&self) -> Option<u64> {
        self.sizes.map(|s| s.1)
    }

    /// Class ratio of the samples the curve was swept from, when known.
    pub fn empirical_ratio(&self) -> Option<ClassRatio> {
        self.sizes
            .and_then(|(p, n)| ClassRatio::from_counts(p, n).ok())
    }
}

/// Sweeps the decision threshold from the highest score down. Samples
/// sharing a score switch to positive together, so each distinct score
/// contributes exactly one vertex and the result is independent of input
/// order.
pub fn sweep(samples: &[ScoredSample]) -> Result<RateCurve> {
    if let Some(bad) = samples.iter().find(|s| !s.score.is_finite()) {
        return Err(Error::NonFiniteScore(bad.score));
    }
    let (n_pos, n_neg) = class_counts(samples);
    if n_pos == 0 {
        return Err(Error::EmptyClass("no positive samples"));
    }
    if n_neg == 0 {
        return Err(Error::EmptyClass("no negative samples"));
    }

    let mut sorted: Vec<&ScoredSample> = samples.iter().collect();
    sorted.sort_by(|a, b| b.score.total_cmp(&a.score));

    let (p, n) = (n_pos as f64, n_neg as f64);
    let mut points = Vec::with_capacity(sorted.len() + 1);
    points.push(OperatingPoint::new(0.0, 0.0)?);
    let (mut tp, mut fp) = (0usize, 0usize);
    for group in sorted.chunk_by(|a, b| a.score == b.score) {
        for s in group {
            match s.label {
                Label::Positive => tp += 1,
                Label::Negative => fp += 1,
            }
        }
        points.push(OperatingPoint::new(tp as f64 / p, fp as f64 / n)?);
    }
    RateCurve::with_sizes(points, n_pos as u64, n_neg as u64)
}

/// ROC curve as `(fpr, tpr)` pairs.
pub fn roc_view(curve: &RateCurve) -> Vec<(f64, f64)> {
    curve.points.iter().map(|p| (p.fpr(), p.tpr())).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrPoint {
    pub recall: f64,
    pub precision: f64,
}

/// Precision against recall at a fixed class ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct PrCurve {
    pub points: Vec<PrPoint>,
    pub ratio: ClassRatio,
}

/// Precision gain against recall gain at a fixed class ratio, restricted
/// to the unit square.
#[derive(Debug, Clone, PartialEq)]
pub struct PrgCurve {
    pub points: Vec<GainPoint>,
    pub ratio: ClassRatio,
}

/// PR curve of the vertices at class ratio `ratio`. Vertices with
/// `tpr = 0` have no defined precision and are skipped.
pub fn pr_view(curve: &RateCurve, ratio: ClassRatio) -> Result<PrCurve> {
    let points = curve
        .points
        .iter()
        .filter(|p| p.tpr() > 0.0)
        .map(|&p| {
            Ok(PrPoint {
                recall: p.tpr(),
                precision: precision_at_ratio(p, ratio)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if points.is_empty() {
        return Err(Error::UndefinedPrecision);
    }
    Ok(PrCurve { points, ratio })
}

/// Predicts the PR curve at `to_r` from a curve measured at `from_r`.
///
/// When the curve records its sample sizes, `from_r` must agree with the
/// empirical ratio to [`RATIO_MATCH_TOLERANCE`].
pub fn rescale_pr(curve: &RateCurve, from_r: ClassRatio, to_r: ClassRatio) -> Result<PrCurve> {
    if let Some(emp) = curve.empirical_ratio() {
        let rel = (from_r.value() - emp.value()).abs() / emp.value();
        if rel > RATIO_MATCH_TOLERANCE {
            return Err(Error::RatioMismatch {
                claimed: from_r.value(),
                empirical: emp.value(),
            });
        }
    }
    pr_view(curve, to_r)
}

/// Rescales an already materialized PR curve to `to_r` without going back
/// to the rate curve. Holding recall fixed, precision transforms as
/// `1/p' - 1 = (r / r') (1/p - 1)`.
pub fn rescale_pr_curve(pr: &PrCurve, to_r: ClassRatio) -> PrCurve {
    let scale = pr.ratio.value() / to_r.value();
    let points = pr
        .points
        .iter()
        .map(|p| PrPoint {
            recall: p.recall,
            precision: 1.0 / (1.0 + scale * (1.0 / p.precision - 1.0)),
        })
        .collect();
    PrCurve {
        points,
        ratio: to_r,
    }
}

/// PRG curve at `ratio`. Points with a negative gain on either axis are
/// dropped.
pub fn prg_view(curve: &RateCurve, ratio: ClassRatio) -> PrgCurve {
    let points = curve
        .points
        .iter()
        .filter(|p| p.tpr() > 0.0)
        .filter_map(|&p| gain_point(p, ratio).ok())
        .filter(|g| g.rec_gain >= 0.0 && g.prec_gain >= 0.0)
        .collect();
    PrgCurve { points, ratio }
}

/// Trapezoidal area under the ROC vertices. Tied score groups become
/// diagonal segments, which counts ties as one half.
pub fn auroc(curve: &RateCurve) -> f64 {
    curve
        .points
        .windows(2)
        .map(|w| (w[1].fpr() - w[0].fpr()) * (w[1].tpr() + w[0].tpr()) / 2.0)
        .sum()
}

/// Average precision: the sum of `precision * (recall increment)` over the
/// vertices, starting from recall 0.
pub fn aupr(pr: &PrCurve) -> Result<f64> {
    if pr.points.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let mut prev = 0.0;
    let mut area = 0.0;
    for p in &pr.points {
        area += (p.recall - prev) * p.precision;
        prev = p.recall;
    }
    Ok(area)
}

/// Area under the PRG curve within the unit square.
///
/// The first point is extended horizontally back to recall gain 0; the
/// remaining points are joined by straight segments. An empty curve has
/// area 0.
pub fn auprg(prg: &PrgCurve) -> f64 {
    let Some(first) = prg.points.first() else {
        return 0.0;
    };
    let mut area = first.rec_gain * first.prec_gain;
    for w in prg.points.windows(2) {
        area += (w[1].rec_gain - w[0].rec_gain) * (w[1].prec_gain + w[0].prec_gain) / 2.0;
    }
    area
}

/// Best F-beta over the vertices with `tpr > 0` at the given ratio.
pub fn max_f_beta(curve: &RateCurve, ratio: ClassRatio, beta: f64) -> Result<f64> {
    let mut best: Option<f64> = None;
    for &p in curve.points.iter().filter(|p| p.tpr() > 0.0) {
        let f = f_beta_from_rates(p, ratio, beta)?;
        best = Some(match best {
            Some(b) if b.total_cmp(&f) != Ordering::Less => b,
            _ => f,
        });
    }
    best.ok_or(Error::UndefinedF)
}

/// PR curve at a fixed reference ratio `r0`, so that classifiers measured
/// on test sets of different imbalance can be compared directly.
pub fn normalized_pr(curve: &RateCurve, r0: ClassRatio) -> Result<PrCurve> {
    pr_view(curve, r0)
}

/// Scalar summaries of a curve evaluated at one fixed ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedMetrics {
    pub r0: ClassRatio,
    pub aupr: f64,
    pub auprg: f64,
    pub max_f_beta: f64,
}

pub fn normalized_metrics(
    curve: &RateCurve,
    r0: ClassRatio,
    beta: f64,
) -> Result<NormalizedMetrics> {
    let pr = normalized_pr(curve, r0)?;
    Ok(NormalizedMetrics {
        r0,
        aupr: aupr(&pr)?,
        auprg: auprg(&prg_view(curve, r0)),
        max_f_beta: max_f_beta(curve, r0, beta)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(tpr: f64, fpr: f64) -> OperatingPoint {
        OperatingPoint::new(tpr, fpr).unwrap()
    }

    fn r(v: f64) -> ClassRatio {
        ClassRatio::new(v).unwrap()
    }

    fn tf(curve: &RateCurve) -> Vec<(f64, f64)> {
        curve.points().iter().map(|p| (p.tpr(), p.fpr())).collect()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
    }

    fn four_sample() -> Vec<ScoredSample> {
        vec![
            ScoredSample::positive(0.8),
            ScoredSample::negative(0.6),
            ScoredSample::positive(0.4),
            ScoredSample::negative(0.2),
        ]
    }

    #[test]
    fn sweep_separated_pair() {
        let c = sweep(&[ScoredSample::positive(0.9), ScoredSample::negative(0.1)]).unwrap();
        assert_eq!(tf(&c), vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]);
        assert_eq!((c.n_pos(), c.n_neg()), (Some(1), Some(1)));
        assert!(roc_view(&c).contains(&(0.0, 1.0)));
    }

    #[test]
    fn sweep_tied_pair_is_one_group() {
        let c = sweep(&[ScoredSample::positive(0.5), ScoredSample::negative(0.5)]).unwrap();
        assert_eq!(tf(&c), vec![(0.0, 0.0), (1.0, 1.0)]);
        assert!(close(auroc(&c), 0.5));
    }

    #[test]
    fn sweep_four_samples() {
        let c = sweep(&four_sample()).unwrap();
        // (fpr, tpr) as enumerated threshold by threshold
        assert_eq!(
            roc_view(&c),
            vec![(0.0, 0.0), (0.0, 0.5), (0.5, 0.5), (0.5, 1.0), (1.0, 1.0)]
        );
        assert!(close(auroc(&c), 0.75));
    }

    #[test]
    fn sweep_order_independent() {
        let mut s = four_sample();
        s.push(ScoredSample::negative(0.4));
        let a = sweep(&s).unwrap();
        s.reverse();
        assert_eq!(a, sweep(&s).unwrap());
    }

    #[test]
    fn sweep_errors() {
        assert!(matches!(
            sweep(&[ScoredSample::positive(0.1)]),
            Err(Error::EmptyClass(_))
        ));
        assert!(matches!(sweep(&[]), Err(Error::EmptyClass(_))));
        assert!(matches!(
            sweep(&[
                ScoredSample::positive(f64::NAN),
                ScoredSample::negative(0.0)
            ]),
            Err(Error::NonFiniteScore(_))
        ));
    }

    #[test]
    fn curve_validation() {
        assert_eq!(RateCurve::from_points(vec![]), Err(Error::EmptyCurve));
        assert!(RateCurve::from_points(vec![op(0.0, 0.0), op(0.5, 0.5)]).is_err());
        assert!(RateCurve::from_points(vec![op(0.1, 0.0), op(1.0, 1.0)]).is_err());
        assert!(RateCurve::from_points(vec![
            op(0.0, 0.0),
            op(0.6, 0.2),
            op(0.5, 0.3),
            op(1.0, 1.0)
        ])
        .is_err());
        assert!(RateCurve::with_sizes(vec![op(0.0, 0.0), op(1.0, 1.0)], 0, 3).is_err());
    }

    #[test]
    fn pr_view_examples() {
        let c = sweep(&[ScoredSample::positive(0.9), ScoredSample::negative(0.1)]).unwrap();
        let pr = pr_view(&c, r(1.0)).unwrap();
        assert_eq!(
            pr.points,
            vec![
                PrPoint {
                    recall: 1.0,
                    precision: 1.0
                },
                PrPoint {
                    recall: 1.0,
                    precision: 0.5
                },
            ]
        );

        let c = RateCurve::from_points(vec![op(0.0, 0.0), op(0.8, 0.1), op(1.0, 1.0)]).unwrap();
        let pr1 = pr_view(&c, r(1.0)).unwrap();
        assert!(close(pr1.points[0].precision, 800.0 / 900.0));
        let pr01 = pr_view(&c, r(0.1)).unwrap();
        assert!(close(pr01.points[0].precision, 400.0 / 900.0));
        assert_eq!(pr01.points[0].recall, 0.8);
    }

    #[test]
    fn pr_view_skips_zero_recall_vertices() {
        // the negative outranks the positive: (fpr=1, tpr=0) has no precision
        let c = sweep(&[ScoredSample::positive(0.1), ScoredSample::negative(0.9)]).unwrap();
        let pr = pr_view(&c, r(1.0)).unwrap();
        assert_eq!(
            pr.points,
            vec![PrPoint {
                recall: 1.0,
                precision: 0.5
            }]
        );
        assert!(close(aupr(&pr).unwrap(), 0.5));
    }

    #[test]
    fn rescale_examples() {
        let c = sweep(&four_sample()).unwrap();
        let same = rescale_pr(&c, r(1.0), r(1.0)).unwrap();
        assert_eq!(same, pr_view(&c, r(1.0)).unwrap());

        let low = rescale_pr(&c, r(1.0), r(0.1)).unwrap();
        for (a, b) in same.points.iter().zip(&low.points) {
            assert_eq!(a.recall, b.recall);
            assert!(b.precision <= a.precision);
        }

        assert!(matches!(
            rescale_pr(&c, r(0.5), r(0.1)),
            Err(Error::RatioMismatch { .. })
        ));

        let bare = RateCurve::from_points(vec![op(0.0, 0.0), op(0.8, 0.1), op(1.0, 1.0)]).unwrap();
        let pred = rescale_pr(&bare, r(1.0), r(0.1)).unwrap();
        assert!(close(pred.points[0].precision, 400.0 / 900.0));
    }

    #[test]
    fn pr_space_rescale_matches_rate_space() {
        let c =
            RateCurve::from_points(vec![op(0.0, 0.0), op(0.5, 0.0), op(0.8, 0.1), op(1.0, 1.0)])
                .unwrap();
        let direct = pr_view(&c, r(0.1)).unwrap();
        let via = rescale_pr_curve(&pr_view(&c, r(1.0)).unwrap(), r(0.1));
        assert_eq!(via.ratio, r(0.1));
        assert_eq!(via.points[0].precision, 1.0);
        for (a, b) in direct.points.iter().zip(&via.points) {
            assert_eq!(a.recall, b.recall);
            assert!(close(a.precision, b.precision));
        }
    }

    #[test]
    fn prg_view_examples() {
        let c = RateCurve::from_points(vec![
            op(0.0, 0.0),
            op(0.4, 0.1),
            op(0.5, 0.5),
            op(0.8, 0.5),
            op(1.0, 1.0),
        ])
        .unwrap();
        let g1 = prg_view(&c, r(1.0));
        // (0.4, 0.1) has rec_gain -0.5; (0.5, 0.5) has rec_gain 0 and prec_gain 0
        assert_eq!(
            g1.points[0],
            GainPoint {
                rec_gain: 0.0,
                prec_gain: 0.0
            }
        );
        assert!(close(g1.points[1].rec_gain, 0.75));
        assert!(close(g1.points[1].prec_gain, 0.375));

        let g01 = prg_view(&c, r(0.1));
        assert!(close(g01.points[0].rec_gain, 0.85));
        assert!(close(g01.points[0].prec_gain, 0.75));
        assert_eq!(g01.points.len(), 4);
    }

    #[test]
    fn prg_view_may_be_empty() {
        let c = RateCurve::from_points(vec![op(0.0, 0.0), op(0.2, 0.9), op(1.0, 1.0)]).unwrap();
        // the (1, 1) vertex always survives with prec_gain 0
        let g = prg_view(&c, r(1.0));
        assert_eq!(
            g.points,
            vec![GainPoint {
                rec_gain: 1.0,
                prec_gain: 0.0
            }]
        );
        assert_eq!(auprg(&g), 0.0);
        let empty = PrgCurve {
            points: vec![],
            ratio: r(1.0),
        };
        assert_eq!(auprg(&empty), 0.0);
    }

    #[test]
    fn area_examples() {
        let perfect = sweep(&[ScoredSample::positive(0.9), ScoredSample::negative(0.1)]).unwrap();
        assert_eq!(auroc(&perfect), 1.0);
        assert_eq!(aupr(&pr_view(&perfect, r(1.0)).unwrap()).unwrap(), 1.0);
        assert_eq!(auprg(&prg_view(&perfect, r(1.0))), 1.0);

        let empty = PrCurve {
            points: vec![],
            ratio: r(1.0),
        };
        assert_eq!(aupr(&empty), Err(Error::EmptyCurve));
    }

    #[test]
    fn auprg_hand_trapezoid() {
        let c =
            RateCurve::from_points(vec![op(0.0, 0.0), op(0.4, 0.1), op(0.8, 0.1), op(1.0, 1.0)])
                .unwrap();
        let g = prg_view(&c, r(1.0));
        // surviving points (0.75, 0.875) and (1, 0):
        // 0.75 * 0.875 + 0.25 * (0.875 + 0) / 2
        assert_eq!(g.points.len(), 2);
        assert!(close(auprg(&g), 0.765625));
    }

    #[test]
    fn normalized_outputs() {
        let c = RateCurve::from_points(vec![op(0.0, 0.0), op(0.8, 0.1), op(1.0, 1.0)]).unwrap();
        let pr = normalized_pr(&c, r(1.0)).unwrap();
        assert!(close(pr.points[0].precision, 800.0 / 900.0));
        let m = normalized_metrics(&c, r(1.0), 1.0).unwrap();
        assert!(close(m.max_f_beta, 16.0 / 19.0));

        let a = RateCurve::with_sizes(c.points().to_vec(), 5000, 5000).unwrap();
        let b = RateCurve::with_sizes(c.points().to_vec(), 500, 5000).unwrap();
        let ma = normalized_metrics(&a, r(0.3), 1.0).unwrap();
        let mb = normalized_metrics(&b, r(0.3), 1.0).unwrap();
        assert_eq!(ma, mb);
    }
}
