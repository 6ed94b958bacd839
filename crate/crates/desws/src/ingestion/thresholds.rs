//! Threshold samples as CSV with the exact header `threshold,dangerous,safe`.

use csv::{ReaderBuilder, Trim};
use desws_core::ThresholdSample;

use super::IngestError;

const HEADER: [&str; 3] = ["threshold", "dangerous", "safe"];

pub fn parse_threshold_samples(text: &str) -> Result<Vec<ThresholdSample>, IngestError> {
    let mut reader = ReaderBuilder::new()
        .has_headers(true)
        .trim(Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| IngestError::MalformedRow {
        line: 1,
        reason: e.to_string(),
    })?;
    if header.iter().collect::<Vec<_>>() != HEADER {
        if text.trim().is_empty() {
            return Err(IngestError::MalformedRow {
                line: 1,
                reason: "missing header `threshold,dangerous,safe`".into(),
            });
        }
        return Err(IngestError::MalformedRow {
            line: 1,
            reason: format!(
                "header must be `threshold,dangerous,safe`, found `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }

    let mut samples: Vec<ThresholdSample> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| IngestError::MalformedRow {
            line: e.position().map_or(0, |p| p.line() as usize),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 3 {
            return Err(IngestError::MalformedRow {
                line,
                reason: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let threshold: f64 = record[0]
            .parse()
            .ok()
            .filter(|t: &f64| t.is_finite())
            .ok_or_else(|| IngestError::MalformedRow {
                line,
                reason: format!("threshold `{}` is not a finite number", &record[0]),
            })?;
        let count = |k: usize, name: &str| -> Result<u64, IngestError> {
            record[k].parse().map_err(|_| IngestError::MalformedRow {
                line,
                reason: format!("{name} `{}` is not a non-negative integer", &record[k]),
            })
        };
        let sample = ThresholdSample {
            threshold_m: threshold,
            dangerous_count: count(1, "dangerous")?,
            safe_count: count(2, "safe")?,
        };
        if samples.iter().any(|s| s.threshold_m == threshold) {
            return Err(IngestError::DuplicateThreshold { line, threshold });
        }
        samples.push(sample);
    }
    Ok(samples)
}

pub fn write_threshold_samples(samples: &[ThresholdSample]) -> String {
    let mut out = String::from("threshold,dangerous,safe\n");
    for s in samples {
        out.push_str(&format!(
            "{},{},{}\n",
            s.threshold_m, s.dangerous_count, s.safe_count
        ));
    }
    out
}
