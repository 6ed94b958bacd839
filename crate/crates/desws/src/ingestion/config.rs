//! Pipeline configuration, a single JSON document. Every field is optional
//! and falls back to [`PipelineConfig::default`]; unknown fields are
//! rejected so that a misspelled unit suffix cannot be silently ignored.

use std::collections::BTreeMap;

use desws_core::{CameraModel, ClassWidthTable, TestMethod, DEFAULT_CLASSES};
use serde::{Deserialize, Serialize};

use super::{schema, IngestError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Ordered class list; label file index `i` refers to `class_names[i]`.
    pub class_names: Vec<String>,
    pub widths_m: BTreeMap<String, f64>,
    /// Only used by the scene simulator to draw plausible boxes.
    pub heights_m: BTreeMap<String, f64>,
    pub focal_length_px: f64,
    pub danger_threshold_m: f64,
    pub test_method: TestMethod,
    pub alpha: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let widths = ClassWidthTable::with_defaults();
        let heights = [
            ("person", 1.7),
            ("bicycle", 1.1),
            ("car", 1.5),
            ("motorcycle", 1.2),
            ("bus", 3.2),
            ("truck", 3.0),
        ];
        Self {
            class_names: DEFAULT_CLASSES.iter().map(|s| s.to_string()).collect(),
            widths_m: widths.iter().map(|(k, v)| (k.to_string(), v)).collect(),
            heights_m: heights.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            focal_length_px: 700.0,
            danger_threshold_m: desws_core::warning::DEFAULT_THRESHOLD_M,
            test_method: TestMethod::MannWhitneyExact,
            alpha: 0.05,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), IngestError> {
        for (i, name) in self.class_names.iter().enumerate() {
            if self.class_names[..i].contains(name) {
                return Err(schema(format!("$.class_names[{i}]"), format!("duplicate class `{name}`")));
            }
            if !self.widths_m.contains_key(name) {
                return Err(schema("$.widths_m", format!("no width for class `{name}`")));
            }
        }
        for (table, map) in [("widths_m", &self.widths_m), ("heights_m", &self.heights_m)] {
            for (k, v) in map {
                if !(*v > 0.0 && v.is_finite()) {
                    return Err(schema(format!("$.{table}.{k}"), "must be strictly positive"));
                }
            }
        }
        for (field, v) in [
            ("focal_length_px", self.focal_length_px),
            ("danger_threshold_m", self.danger_threshold_m),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(schema(format!("$.{field}"), "must be strictly positive"));
            }
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(schema("$.alpha", "must lie in (0, 1)"));
        }
        Ok(())
    }

    pub fn camera(&self) -> CameraModel {
        CameraModel::new(self.focal_length_px).expect("validated focal length")
    }

    pub fn width_table(&self) -> ClassWidthTable {
        let mut t = ClassWidthTable::new();
        for (k, v) in &self.widths_m {
            t.insert(k.clone(), *v).expect("validated width");
        }
        t
    }
}

pub fn parse_config(text: &str) -> Result<PipelineConfig, IngestError> {
    let config: PipelineConfig = serde_json::from_str(text).map_err(|e| {
        schema(
            "$",
            format!("line {} column {}: {e}", e.line(), e.column()),
        )
    })?;
    config.validate()?;
    Ok(config)
}
