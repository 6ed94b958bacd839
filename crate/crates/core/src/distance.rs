//! Adaptive width-based monocular distance estimation.
//!
//! A pinhole camera with focal length `f` (pixels) images an object of real
//! width `W` (meters) at distance `D` as a box `w = f * W / D` pixels wide.
//! Each class carries a preset real width, so inverting the proportion
//! gives `D = f * W / w`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};

use thiserror::Error;

use crate::detection::Detection;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistanceError {
    #[error("no real width configured for class {0:?}")]
    UnknownClass(String),
    #[error("detection box has zero pixel width")]
    ZeroPixelWidth,
    #[error("{0} must be strictly positive and finite")]
    NonPositiveInput(&'static str),
}

fn positive(value: f64, name: &'static str) -> Result<f64, DistanceError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(DistanceError::NonPositiveInput(name))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CameraModel {
    focal_length_px: f64,
}

impl CameraModel {
    pub fn new(focal_length_px: f64) -> Result<Self, DistanceError> {
        Ok(Self {
            focal_length_px: positive(focal_length_px, "focal_length_px")?,
        })
    }

    pub fn focal_length_px(&self) -> f64 {
        self.focal_length_px
    }
}

/// Preset real width in meters per class label.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct ClassWidthTable {
    widths_m: BTreeMap<String, f64>,
}

impl ClassWidthTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Typical physical widths for the six default classes. These are
    /// configuration defaults, overridable per deployment.
    pub fn with_defaults() -> Self {
        let mut table = Self::new();
        for (class, width) in [
            ("person", 0.5),
            ("bicycle", 0.6),
            ("car", 1.8),
            ("motorcycle", 0.8),
            ("bus", 2.5),
            ("truck", 2.5),
        ] {
            table.widths_m.insert(class.to_string(), width);
        }
        table
    }

    pub fn insert(
        &mut self,
        class_label: impl Into<String>,
        real_width_m: f64,
    ) -> Result<(), DistanceError> {
        let w = positive(real_width_m, "real_width_m")?;
        self.widths_m.insert(class_label.into(), w);
        Ok(())
    }

    pub fn get(&self, class_label: &str) -> Option<f64> {
        self.widths_m.get(class_label).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.widths_m.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.widths_m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.widths_m.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DistanceEstimate {
    pub class_label: String,
    pub pixel_width: f64,
    pub real_width_m: f64,
    pub distance_m: f64,
}

pub fn estimate_distance(
    cam: &CameraModel,
    widths: &ClassWidthTable,
    det: &Detection,
) -> Result<DistanceEstimate, DistanceError> {
    let real_width_m = widths
        .get(&det.class_label)
        .ok_or_else(|| DistanceError::UnknownClass(det.class_label.clone()))?;
    let pixel_width = det.bbox.width();
    if pixel_width <= 0.0 {
        return Err(DistanceError::ZeroPixelWidth);
    }
    Ok(DistanceEstimate {
        class_label: det.class_label.clone(),
        pixel_width,
        real_width_m,
        distance_m: cam.focal_length_px * real_width_m / pixel_width,
    })
}

/// Recovers the focal length from one object of known width observed at a
/// known distance.
pub fn calibrate_focal(
    known_distance_m: f64,
    real_width_m: f64,
    pixel_width: f64,
) -> Result<CameraModel, DistanceError> {
    let d = positive(known_distance_m, "known_distance_m")?;
    let w = positive(real_width_m, "real_width_m")?;
    let p = positive(pixel_width, "pixel_width")?;
    CameraModel::new(d * p / w)
}
