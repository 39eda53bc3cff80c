//! Command-line front end. Commands only read inputs, call the library
//! and write CSV, JSON and SVG files; no metric is computed here.

pub mod ingest;
pub mod output;
pub mod svg;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::curves::{
    aupr, auprg, auroc, max_f_beta, normalized_metrics, pr_view, prg_view, rescale_pr, roc_view,
    sweep, PrCurve, RateCurve,
};
use crate::metrics::ClassRatio;
use crate::synth::{run_fig1_seeds, Fig1Config, RecallGrid};

pub use ingest::{ingest_scores, parse_scores};
use output::{ensure_dir, ratio_file, write_metrics, write_table, write_text, MetricRow};
use svg::{LineChart, Series};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_DOMAIN: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Domain(#[from] crate::Error),

    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl CliError {
    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            message: err.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => EXIT_PARSE,
            CliError::Config(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ratiopr",
    version,
    about = "Class-ratio aware PR, F-beta and PRG evaluation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ROC, PR and PRG curves plus scalar metrics at one or more ratios.
    Curves(CurvesArgs),
    /// Predict the PR curve of a scored test set at another class ratio.
    Rescale(RescaleArgs),
    /// Run the synthetic predicted-vs-measured PR benchmark.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CurvesArgs {
    /// CSV of `score,label` rows.
    #[arg(long)]
    pub input: PathBuf,
    /// Comma-separated class ratios P/N. Defaults to the input's own ratio.
    #[arg(long, value_delimiter = ',')]
    pub ratios: Vec<f64>,
    /// Reference ratio for the normalized metrics.
    #[arg(long, default_value_t = 1.0)]
    pub r0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct RescaleArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Ratio the input was measured at; checked against the data.
    #[arg(long)]
    pub from_r: Option<f64>,
    #[arg(long)]
    pub to_r: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of consecutive seeds to average the gaps over.
    #[arg(long, default_value_t = 1)]
    pub repeats: u64,
    /// Ratio of the subsampled test set.
    #[arg(long, default_value_t = 0.1)]
    pub to_r: f64,
    /// Recall grid as `start:stop:count`.
    #[arg(long, default_value = "0.05:0.95:181")]
    pub grid: String,
    #[arg(long, default_value_t = 5000)]
    pub n_pos: usize,
    #[arg(long, default_value_t = 5000)]
    pub n_neg: usize,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

fn ratio_arg(name: &str, v: f64) -> Result<ClassRatio, CliError> {
    ClassRatio::new(v)
        .map_err(|_| CliError::Config(format!("{name} must be positive and finite, got {v}")))
}

fn beta_arg(v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Config(format!("beta must be positive, got {v}")))
    }
}

pub fn parse_grid(spec: &str) -> Result<RecallGrid, CliError> {
    let bad = || {
        CliError::Config(format!(
            "grid must be start:stop:count within (0, 1], got {spec:?}"
        ))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, count] = parts.as_slice() else {
        return Err(bad());
    };
    let start = start.trim().parse::<f64>().map_err(|_| bad())?;
    let stop = stop.trim().parse::<f64>().map_err(|_| bad())?;
    let count = count.trim().parse::<usize>().map_err(|_| bad())?;
    RecallGrid::new(start, stop, count).map_err(|_| bad())
}

fn pr_rows(pr: &PrCurve) -> Vec<Vec<f64>> {
    pr.points
        .iter()
        .map(|p| vec![p.recall, p.precision])
        .collect()
}

fn pr_series(name: String, pr: &PrCurve) -> Series {
    Series {
        name,
        points: pr.points.iter().map(|p| (p.recall, p.precision)).collect(),
    }
}

fn empirical(curve: &RateCurve) -> Result<ClassRatio, CliError> {
    curve
        .empirical_ratio()
        .ok_or_else(|| CliError::Config("curve has no recorded sample sizes".into()))
}

fn per_ratio_metrics(
    curve: &RateCurve,
    pr: &PrCurve,
    ratio: ClassRatio,
    beta: f64,
) -> Result<Vec<MetricRow>, CliError> {
    let r = Some(ratio.value());
    Ok(vec![
        MetricRow {
            metric: "aupr",
            ratio: r,
            value: aupr(pr)?,
        },
        MetricRow {
            metric: "auprg",
            ratio: r,
            value: auprg(&prg_view(curve, ratio)),
        },
        MetricRow {
            metric: "f_beta",
            ratio: r,
            value: max_f_beta(curve, ratio, beta)?,
        },
    ])
}

/// Writes `roc.csv`, `pr_r<r>.csv` and `prg_r<r>.csv` per ratio,
/// `metrics.csv` and `pr_curves.svg` into the output directory.
pub fn cmd_curves(args: &CurvesArgs) -> Result<Vec<PathBuf>, CliError> {
    let r0 = ratio_arg("r0", args.r0)?;
    let beta = beta_arg(args.beta)?;
    let mut ratios = args
        .ratios
        .iter()
        .map(|&r| ratio_arg("ratio", r))
        .collect::<Result<Vec<_>, _>>()?;

    let samples = ingest_scores(&args.input)?;
    let curve = sweep(&samples)?;
    let emp = empirical(&curve)?;
    if ratios.is_empty() {
        ratios.push(emp);
    }

    let dir = &args.out_dir;
    ensure_dir(dir)?;
    let mut written = Vec::new();

    let roc_path = dir.join("roc.csv");
    let roc: Vec<Vec<f64>> = roc_view(&curve)
        .into_iter()
        .map(|(f, t)| vec![f, t])
        .collect();
    write_table(&roc_path, &["fpr", "tpr"], &roc)?;
    written.push(roc_path);

    let mut metrics = vec![
        MetricRow {
            metric: "empirical_ratio",
            ratio: None,
            value: emp.value(),
        },
        MetricRow {
            metric: "auroc",
            ratio: None,
            value: auroc(&curve),
        },
    ];
    let mut chart = LineChart {
        title: "Precision-recall at several class ratios".into(),
        x_label: "Recall".into(),
        y_label: "Precision".into(),
        series: Vec::new(),
    };
    for &ratio in &ratios {
        let pr = pr_view(&curve, ratio)?;
        let pr_path = ratio_file(dir, "pr", ratio.value());
        write_table(&pr_path, &["recall", "precision"], &pr_rows(&pr))?;
        written.push(pr_path);

        let prg = prg_view(&curve, ratio);
        let prg_rows: Vec<Vec<f64>> = prg
            .points
            .iter()
            .map(|g| vec![g.rec_gain, g.prec_gain])
            .collect();
        let prg_path = ratio_file(dir, "prg", ratio.value());
        write_table(&prg_path, &["rec_gain", "prec_gain"], &prg_rows)?;
        written.push(prg_path);

        metrics.extend(per_ratio_metrics(&curve, &pr, ratio, beta)?);
        chart
            .series
            .push(pr_series(format!("r = {}", ratio.value()), &pr));
    }

    let norm = normalized_metrics(&curve, r0, beta)?;
    let r0v = Some(r0.value());
    metrics.extend([
        MetricRow {
            metric: "normalized_aupr",
            ratio: r0v,
            value: norm.aupr,
        },
        MetricRow {
            metric: "normalized_auprg",
            ratio: r0v,
            value: norm.auprg,
        },
        MetricRow {
            metric: "normalized_f_beta",
            ratio: r0v,
            value: norm.max_f_beta,
        },
    ]);
    let metrics_path = dir.join("metrics.csv");
    write_metrics(&metrics_path, &metrics)?;
    written.push(metrics_path);

    let svg_path = dir.join("pr_curves.svg");
    write_text(&svg_path, &chart.render())?;
    written.push(svg_path);
    Ok(written)
}

/// Writes the PR curve predicted at `to_r` as `pr_r<to_r>.csv` and its
/// scalar metrics as `metrics.csv`.
pub fn cmd_rescale(args: &RescaleArgs) -> Result<Vec<PathBuf>, CliError> {
    let to_r = ratio_arg("to-r", args.to_r)?;
    let from_r = args.from_r.map(|r| ratio_arg("from-r", r)).transpose()?;
    let beta = beta_arg(args.beta)?;

    let samples = ingest_scores(&args.input)?;
    let curve = sweep(&samples)?;
    let from_r = match from_r {
        Some(r) => r,
        None => empirical(&curve)?,
    };
    let pr = rescale_pr(&curve, from_r, to_r)?;

    let dir = &args.out_dir;
    ensure_dir(dir)?;
    let pr_path = ratio_file(dir, "pr", to_r.value());
    write_table(&pr_path, &["recall", "precision"], &pr_rows(&pr))?;

    let mut metrics = vec![MetricRow {
        metric: "from_ratio",
        ratio: None,
        value: from_r.value(),
    }];
    metrics.extend(per_ratio_metrics(&curve, &pr, to_r, beta)?);
    let metrics_path = dir.join("metrics.csv");
    write_metrics(&metrics_path, &metrics)?;
    Ok(vec![pr_path, metrics_path])
}

#[derive(Debug, Serialize)]
struct Summary {
    seed: u64,
    repeats: u64,
    n_pos: usize,
    n_neg: usize,
    to_r: f64,
    mean_abs_gap: f64,
    max_abs_gap: f64,
    auroc_balanced: f64,
    auroc_subsampled: f64,
    mean_abs_gap_avg: f64,
    max_abs_gap_avg: f64,
}

/// Runs the benchmark and writes `comparison.csv`, `summary.json` and
/// `fig1.svg`. Files describe the first seed; the `_avg` summary fields
/// average over all repeats.
pub fn cmd_simulate(args: &SimulateArgs) -> Result<Vec<PathBuf>, CliError> {
    let r_low = ratio_arg("to-r", args.to_r)?;
    let grid = parse_grid(&args.grid)?;
    if args.repeats == 0 {
        return Err(CliError::Config("repeats must be at least 1".into()));
    }
    let config = Fig1Config {
        n_test_pos: args.n_pos,
        n_test_neg: args.n_neg,
        r_low,
        grid,
        ..Default::default()
    };
    let seeds: Vec<u64> = (0..args.repeats)
        .map(|i| args.seed.wrapping_add(i))
        .collect();
    let runs = run_fig1_seeds(&config, &seeds)?;
    let run = &runs[0];
    let rep = &run.report;

    let dir = &args.out_dir;
    ensure_dir(dir)?;
    let cmp_path = dir.join("comparison.csv");
    let rows: Vec<Vec<f64>> = rep
        .recall_grid
        .iter()
        .zip(&rep.predicted_precision)
        .zip(&rep.empirical_precision)
        .map(|((&g, &p), &e)| vec![g, p, e, (p - e).abs()])
        .collect();
    write_table(
        &cmp_path,
        &["recall", "predicted", "empirical", "gap"],
        &rows,
    )?;

    let n = runs.len() as f64;
    let summary = Summary {
        seed: args.seed,
        repeats: args.repeats,
        n_pos: args.n_pos,
        n_neg: args.n_neg,
        to_r: r_low.value(),
        mean_abs_gap: rep.mean_abs_gap,
        max_abs_gap: rep.max_abs_gap,
        auroc_balanced: run.auroc_balanced,
        auroc_subsampled: run.auroc_subsampled,
        mean_abs_gap_avg: runs.iter().map(|r| r.report.mean_abs_gap).sum::<f64>() / n,
        max_abs_gap_avg: runs.iter().map(|r| r.report.max_abs_gap).sum::<f64>() / n,
    };
    let summary_path = dir.join("summary.json");
    let json =
        serde_json::to_string_pretty(&summary).map_err(|e| CliError::io(&summary_path, e))?;
    write_text(&summary_path, &(json + "\n"))?;

    let chart = LineChart {
        title: "Predicted vs measured precision-recall".into(),
        x_label: "Recall".into(),
        y_label: "Precision".into(),
        series: vec![
            pr_series(
                format!("balanced (r = {})", run.balanced.ratio.value()),
                &run.balanced,
            ),
            pr_series(format!("predicted (r = {})", r_low.value()), &run.predicted),
            pr_series(
                format!("measured (r = {})", run.empirical.ratio.value()),
                &run.empirical,
            ),
        ],
    };
    let svg_path = dir.join("fig1.svg");
    write_text(&svg_path, &chart.render())?;
    Ok(vec![cmp_path, summary_path, svg_path])
}

pub fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    match &cli.command {
        Command::Curves(a) => cmd_curves(a),
        Command::Rescale(a) => cmd_rescale(a),
        Command::Simulate(a) => cmd_simulate(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0.05:0.95:181").unwrap(), RecallGrid::default());
        assert!(parse_grid("0:0.5:3").is_err());
        assert!(parse_grid("0.1:0.5").is_err());
        assert!(parse_grid("a:b:c").is_err());
    }

    #[test]
    fn exit_codes_are_distinct() {
        let codes = [
            CliError::Parse {
                line: 1,
                message: String::new(),
            }
            .exit_code(),
            CliError::Config(String::new()).exit_code(),
            CliError::Domain(crate::Error::EmptyCurve).exit_code(),
            CliError::io(Path::new("x"), "boom").exit_code(),
        ];
        for (i, a) in codes.iter().enumerate() {
            assert_ne!(*a, EXIT_OK);
            for b in &codes[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }
}
