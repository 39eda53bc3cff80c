use std::fs;
use std::path::{Path, PathBuf};

use super::CliError;

/// Shortest decimal string that parses back to exactly `v`.
pub fn fmt_num(v: f64) -> String {
    format!("{v}")
}

/// Writes a CSV with one header row and numeric rows.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::io(path, e))?;
    w.write_record(header).map_err(|e| CliError::io(path, e))?;
    for row in rows {
        w.write_record(row.iter().map(|v| fmt_num(*v)))
            .map_err(|e| CliError::io(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// One row of `metrics.csv`. `ratio` is empty for ratio-free metrics.
pub struct MetricRow {
    pub metric: &'static str,
    pub ratio: Option<f64>,
    pub value: f64,
}

pub fn write_metrics(path: &Path, rows: &[MetricRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::io(path, e))?;
    w.write_record(["metric", "ratio", "value"])
        .map_err(|e| CliError::io(path, e))?;
    for r in rows {
        let ratio = r.ratio.map(fmt_num).unwrap_or_default();
        w.write_record([r.metric, ratio.as_str(), fmt_num(r.value).as_str()])
            .map_err(|e| CliError::io(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// `<dir>/<prefix>_r<ratio>.csv`
pub fn ratio_file(dir: &Path, prefix: &str, ratio: f64) -> PathBuf {
    dir.join(format!("{prefix}_r{}.csv", fmt_num(ratio)))
}

/// Reads back a numeric table written by [`write_table`].
pub fn read_table(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| CliError::io(path, e))?;
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| CliError::io(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>().map_err(|_| CliError::Parse {
                    line,
                    message: format!("invalid number {f:?}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}
