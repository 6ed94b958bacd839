//! Simulator scene description (JSON).
//!
//! ```json
//! {"image_id": "scene", "camera": {"image_width_px": 1280, "image_height_px": 720},
//!  "noise_px_std": 0,
//!  "objects": [{"class": "car", "distance_m": 10, "lateral_offset_m": -2}]}
//! ```
//!
//! `camera.focal_length_px`, `real_width_m` and `real_height_m` fall back to
//! the pipeline configuration.

use desws_core::{ImageCamera, SceneObject, SceneSpec};
use serde::{Deserialize, Serialize};

use super::{schema, IngestError, PipelineConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub image_id: String,
    pub camera: SceneCamera,
    #[serde(default)]
    pub noise_px_std: f64,
    pub objects: Vec<SceneFileObject>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneCamera {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub focal_length_px: Option<f64>,
    pub image_width_px: f64,
    pub image_height_px: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFileObject {
    pub class: String,
    pub distance_m: f64,
    #[serde(default)]
    pub lateral_offset_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real_width_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real_height_m: Option<f64>,
}

impl SceneFile {
    /// Resolves defaults against `config` and checks every number.
    pub fn to_spec(&self, config: &PipelineConfig) -> Result<SceneSpec, IngestError> {
        let positive = |path: String, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(schema(path, format!("{v} must be strictly positive")))
            }
        };
        if self.image_id.is_empty() || self.image_id.contains(['/', '\\']) {
            return Err(schema("$.image_id", "must be a non-empty file stem"));
        }
        let camera = ImageCamera {
            focal_length_px: positive(
                "$.camera.focal_length_px".into(),
                self.camera.focal_length_px.unwrap_or(config.focal_length_px),
            )?,
            image_width_px: positive("$.camera.image_width_px".into(), self.camera.image_width_px)?,
            image_height_px: positive("$.camera.image_height_px".into(), self.camera.image_height_px)?,
        };
        if !(self.noise_px_std >= 0.0 && self.noise_px_std.is_finite()) {
            return Err(schema("$.noise_px_std", "must be non-negative"));
        }
        let mut objects = Vec::with_capacity(self.objects.len());
        for (i, o) in self.objects.iter().enumerate() {
            let p = |field: &str| format!("$.objects[{i}].{field}");
            if !config.class_names.contains(&o.class) {
                return Err(schema(p("class"), format!("unknown class `{}`", o.class)));
            }
            let width = match o.real_width_m.or_else(|| config.widths_m.get(&o.class).copied()) {
                Some(w) => positive(p("real_width_m"), w)?,
                None => return Err(schema(p("real_width_m"), "no width configured for class")),
            };
            let height = match o.real_height_m.or_else(|| config.heights_m.get(&o.class).copied()) {
                Some(h) => positive(p("real_height_m"), h)?,
                None => return Err(schema(p("real_height_m"), "no height configured for class")),
            };
            if !o.lateral_offset_m.is_finite() {
                return Err(schema(p("lateral_offset_m"), "must be finite"));
            }
            objects.push(SceneObject {
                class_label: o.class.clone(),
                real_width_m: width,
                real_height_m: height,
                distance_m: positive(p("distance_m"), o.distance_m)?,
                lateral_offset_m: o.lateral_offset_m,
            });
        }
        Ok(SceneSpec {
            image_id: self.image_id.clone(),
            camera,
            objects,
            noise_px_std: self.noise_px_std,
        })
    }
}

pub fn parse_scene(text: &str) -> Result<SceneFile, IngestError> {
    serde_json::from_str(text)
        .map_err(|e| schema("$", format!("line {} column {}: {e}", e.line(), e.column())))
}
