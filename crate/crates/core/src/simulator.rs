//! Synthetic pinhole scenes with known ground-truth distances.
//!
//! Each object is projected forward through `w_px = f * W / D` (and the same
//! for height); its horizontal center sits at `cx + f * X / D` for lateral
//! offset `X` and its vertical center at the image center. Optional Gaussian
//! noise perturbs the detected pixel width only.

use alloc::string::String;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::detection::{Detection, GroundTruth};
use crate::geometry::{BBox, GeometryError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimulatorError {
    #[error("object {index} is not in front of the camera (distance {distance_m})")]
    BehindCamera { index: usize, distance_m: f64 },
    #[error("invalid scene: {0}")]
    InvalidSpec(&'static str),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ImageCamera {
    pub focal_length_px: f64,
    pub image_width_px: f64,
    pub image_height_px: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneObject {
    pub class_label: String,
    pub real_width_m: f64,
    pub real_height_m: f64,
    pub distance_m: f64,
    pub lateral_offset_m: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneSpec {
    pub image_id: String,
    pub camera: ImageCamera,
    pub objects: Vec<SceneObject>,
    /// Standard deviation of the pixel-width perturbation; 0 disables noise.
    pub noise_px_std: f64,
}

impl SceneSpec {
    fn validate(&self) -> Result<(), SimulatorError> {
        let c = &self.camera;
        for v in [c.focal_length_px, c.image_width_px, c.image_height_px] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SimulatorError::InvalidSpec("camera fields must be positive"));
            }
        }
        if !(self.noise_px_std >= 0.0 && self.noise_px_std.is_finite()) {
            return Err(SimulatorError::InvalidSpec("noise std must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    /// Box after clipping to the image.
    pub bbox: BBox,
    pub unclamped: BBox,
    pub clamped: bool,
}

fn project_with_width(
    camera: &ImageCamera,
    obj: &SceneObject,
    pixel_width: f64,
) -> Result<Projection, SimulatorError> {
    let f = camera.focal_length_px;
    let height = f * obj.real_height_m / obj.distance_m;
    let cx = camera.image_width_px / 2.0 + f * obj.lateral_offset_m / obj.distance_m;
    let cy = camera.image_height_px / 2.0;
    let unclamped = BBox::from_center_size(cx, cy, pixel_width, height)?;
    let (bbox, clamped) = unclamped.clamp_to(camera.image_width_px, camera.image_height_px);
    Ok(Projection {
        bbox,
        unclamped,
        clamped,
    })
}

fn check_object(index: usize, obj: &SceneObject) -> Result<(), SimulatorError> {
    if !(obj.distance_m > 0.0 && obj.distance_m.is_finite()) {
        return Err(SimulatorError::BehindCamera {
            index,
            distance_m: obj.distance_m,
        });
    }
    if !(obj.real_width_m > 0.0 && obj.real_width_m.is_finite())
        || !(obj.real_height_m > 0.0 && obj.real_height_m.is_finite())
    {
        return Err(SimulatorError::InvalidSpec("object size must be positive"));
    }
    if !obj.lateral_offset_m.is_finite() {
        return Err(SimulatorError::InvalidSpec("lateral offset must be finite"));
    }
    Ok(())
}

/// Noise-free projection of one object.
pub fn project(spec: &SceneSpec, obj: &SceneObject) -> Result<Projection, SimulatorError> {
    spec.validate()?;
    check_object(0, obj)?;
    let width = spec.camera.focal_length_px * obj.real_width_m / obj.distance_m;
    project_with_width(&spec.camera, obj, width)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TruthRow {
    pub index: usize,
    pub class_label: String,
    pub distance_m: f64,
    pub real_width_m: f64,
    pub pixel_width: f64,
    pub clamped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedScene {
    pub image_id: String,
    pub camera: ImageCamera,
    pub ground_truths: Vec<GroundTruth>,
    /// One detection per object, confidence 1.0, same order as `truth`.
    pub detections: Vec<Detection>,
    pub truth: Vec<TruthRow>,
}

/// Projects every object; detections get seeded Gaussian width noise when
/// `noise_px_std > 0`. The output is a pure function of `(spec, seed)`.
pub fn generate(spec: &SceneSpec, seed: u64) -> Result<GeneratedScene, SimulatorError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = if spec.noise_px_std > 0.0 {
        Some(
            Normal::new(0.0, spec.noise_px_std)
                .map_err(|_| SimulatorError::InvalidSpec("noise std must be non-negative"))?,
        )
    } else {
        None
    };

    let mut ground_truths = Vec::with_capacity(spec.objects.len());
    let mut detections = Vec::with_capacity(spec.objects.len());
    let mut truth = Vec::with_capacity(spec.objects.len());
    for (index, obj) in spec.objects.iter().enumerate() {
        check_object(index, obj)?;
        let true_width = spec.camera.focal_length_px * obj.real_width_m / obj.distance_m;
        let exact = project_with_width(&spec.camera, obj, true_width)?;
        let detected = match &noise {
            None => exact,
            Some(dist) => {
                let mut w = true_width + dist.sample(&mut rng);
                // Redraw the rare non-positive widths.
                let mut tries = 0;
                while w <= 0.0 && tries < 64 {
                    w = true_width + dist.sample(&mut rng);
                    tries += 1;
                }
                if w <= 0.0 {
                    w = true_width;
                }
                project_with_width(&spec.camera, obj, w)?
            }
        };
        ground_truths.push(GroundTruth::new(obj.class_label.clone(), exact.bbox));
        detections.push(
            Detection::new(obj.class_label.clone(), detected.bbox, 1.0)
                .expect("unit confidence is in range"),
        );
        truth.push(TruthRow {
            index,
            class_label: obj.class_label.clone(),
            distance_m: obj.distance_m,
            real_width_m: obj.real_width_m,
            pixel_width: true_width,
            clamped: exact.clamped,
        });
    }
    Ok(GeneratedScene {
        image_id: spec.image_id.clone(),
        camera: spec.camera,
        ground_truths,
        detections,
        truth,
    })
}
