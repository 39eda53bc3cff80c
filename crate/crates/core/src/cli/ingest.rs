use std::fs::File;
use std::io::Read;
use std::path::Path;

use super::CliError;
use crate::curves::{class_counts, Label, ScoredSample};
use crate::Error;

fn parse_label(token: &str) -> Option<Label> {
    match token {
        "1" | "pos" => Some(Label::Positive),
        "0" | "neg" => Some(Label::Negative),
        _ => None,
    }
}

/// Reads `score,label` rows from a CSV file.
pub fn ingest_scores(path: &Path) -> Result<Vec<ScoredSample>, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    parse_scores(file)
}

/// Parses `score,label` rows. Labels are `1`/`0` or `pos`/`neg`. A first
/// row whose score field is not a number is taken as a header.
pub fn parse_scores<R: Read>(reader: R) -> Result<Vec<ScoredSample>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut samples = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| CliError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        let parse_err = |message: String| CliError::Parse { line, message };

        if record.len() != 2 {
            return Err(parse_err(format!(
                "expected 2 fields, found {}",
                record.len()
            )));
        }
        let score = match record[0].parse::<f64>() {
            Ok(s) if s.is_finite() => s,
            Ok(s) => return Err(parse_err(format!("non-finite score {s}"))),
            Err(_) if i == 0 => continue,
            Err(_) => return Err(parse_err(format!("invalid score {:?}", &record[0]))),
        };
        let label = parse_label(&record[1])
            .ok_or_else(|| parse_err(format!("invalid label {:?}", &record[1])))?;
        samples.push(ScoredSample::new(score, label));
    }

    let (pos, neg) = class_counts(&samples);
    if pos == 0 {
        return Err(Error::EmptyClass("input has no positive rows").into());
    }
    if neg == 0 {
        return Err(Error::EmptyClass("input has no negative rows").into());
    }
    Ok(samples)
}
