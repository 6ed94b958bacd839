//! Allocation-only core of the DESWS pipeline.
//!
//! Everything numeric lives here: axis-aligned box geometry and the DIoU
//! loss, similar-triangle monocular distance estimation, rank-based
//! threshold analysis with safe/dangerous verdicts, mAP@0.5 scoring, a
//! reference Squeeze-and-Excitation forward pass and a synthetic pinhole
//! scene generator. The crate is `no_std` and needs only `alloc`; file
//! formats, reports and the command-line front end live in the `desws`
//! crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod detection;
pub mod distance;
pub mod evaluation;
pub mod geometry;
pub mod se_block;
pub mod simulator;
pub mod warning;

pub use detection::{Detection, DetectionError, GroundTruth, DEFAULT_CLASSES};
pub use distance::{
    calibrate_focal, estimate_distance, CameraModel, ClassWidthTable, DistanceError,
    DistanceEstimate,
};
pub use evaluation::{
    average_precision, evaluate, match_detections, ClassCounts, EvalError, EvalImage, EvalReport,
    MatchLabel, MatchedDetection,
};
pub use geometry::{diou_loss, enclosing_rect, iou, BBox, DiouBreakdown, GeometryError};
pub use se_block::{excite, se_forward, squeeze, FeatureMap, SeError, SeWeights};
pub use simulator::{
    generate, project, GeneratedScene, ImageCamera, Projection, SceneObject, SceneSpec,
    SimulatorError, TruthRow,
};
pub use warning::{
    analyze_thresholds, classify, kruskal_wallis, mann_whitney_u, u_statistics, MannWhitneyMode,
    SafetyVerdict, TestMethod, TestResult, ThresholdAnalysis, ThresholdSample, Verdict,
    WarningError,
};
