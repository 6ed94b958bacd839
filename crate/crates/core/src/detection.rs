use alloc::string::String;

use thiserror::Error;

use crate::geometry::BBox;

/// Class order used by label files: index `i` names class `DEFAULT_CLASSES[i]`.
pub const DEFAULT_CLASSES: [&str; 6] = ["person", "bicycle", "car", "motorcycle", "bus", "truck"];

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DetectionError {
    #[error("confidence {0} is outside [0, 1]")]
    ConfidenceOutOfRange(f64),
}

/// One detector output.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Detection {
    pub class_label: String,
    pub bbox: BBox,
    confidence: f64,
}

impl Detection {
    pub fn new(
        class_label: impl Into<String>,
        bbox: BBox,
        confidence: f64,
    ) -> Result<Self, DetectionError> {
        if !(0.0..=1.0).contains(&confidence) {
            return Err(DetectionError::ConfidenceOutOfRange(confidence));
        }
        Ok(Self {
            class_label: class_label.into(),
            bbox,
            confidence,
        })
    }

    pub fn confidence(&self) -> f64 {
        self.confidence
    }
}

/// Reference annotation.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GroundTruth {
    pub class_label: String,
    pub bbox: BBox,
}

impl GroundTruth {
    pub fn new(class_label: impl Into<String>, bbox: BBox) -> Self {
        Self {
            class_label: class_label.into(),
            bbox,
        }
    }
}
