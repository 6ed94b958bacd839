//! Parsers and writers for every external file format.
//!
//! All parse errors carry the location of the offending input (line number
//! or JSON field path); none of the parsers panic on malformed text. The
//! grammars are documented in `FORMATS.md` at the repository root.

mod config;
mod detections;
mod labels;
mod scene;
mod se_weights;
mod thresholds;

use thiserror::Error;

pub use config::{parse_config, PipelineConfig};
pub use detections::{parse_detections, write_detections, ClassRef, DetectionRecord, DetectionSet};
pub use labels::{parse_label_file, parse_labels, write_label_file, LabelEntry, LabelFile};
pub use scene::{parse_scene, SceneCamera, SceneFile, SceneFileObject};
pub use se_weights::{parse_se_weights, write_se_weights};
pub use thresholds::{parse_threshold_samples, write_threshold_samples};

#[derive(Debug, Error, PartialEq)]
pub enum IngestError {
    #[error("line {line}: malformed line: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("line {line}: field `{field}` = {value} is out of range")]
    OutOfRangeField {
        line: usize,
        field: &'static str,
        value: f64,
    },
    #[error("line {line}: class index {index} is not below {num_classes}")]
    UnknownClassIndex {
        line: usize,
        index: usize,
        num_classes: usize,
    },
    #[error("{path}: {reason}")]
    SchemaError { path: String, reason: String },
    #[error("{path}: invalid box: {reason}")]
    InvalidBox { path: String, reason: String },
    #[error("line {line}: threshold {threshold} appears more than once")]
    DuplicateThreshold { line: usize, threshold: f64 },
    #[error("line {line}: malformed row: {reason}")]
    MalformedRow { line: usize, reason: String },
}

pub(crate) fn schema(path: impl Into<String>, reason: impl Into<String>) -> IngestError {
    IngestError::SchemaError {
        path: path.into(),
        reason: reason.into(),
    }
}
