//! Detection scoring: greedy matching, all-point interpolated average
//! precision and the mean over classes.
//!
//! Within one image and class, detections are visited by descending
//! confidence; each claims the unmatched ground truth it overlaps most, if
//! that overlap reaches the IoU threshold. Results are pooled per class
//! across images and re-sorted by `(confidence desc, image index, input
//! order)` before integrating the precision envelope.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::detection::{Detection, GroundTruth};
use crate::geometry::iou;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EvalError {
    #[error("dataset contains no images")]
    EmptyDataset,
    #[error("average precision needs at least one ground truth")]
    ZeroGroundTruth,
    #[error("IoU threshold {0} is outside (0, 1]")]
    InvalidIouThreshold(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum MatchLabel {
    TruePositive,
    FalsePositive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedDetection {
    /// Position of the detection in the input slice.
    pub index: usize,
    pub confidence: f64,
    pub label: MatchLabel,
    /// Ground truth claimed by a true positive.
    pub matched_gt: Option<usize>,
}

/// Greedy confidence-ordered matching for one image. Detections are
/// returned in visiting order (descending confidence, ties by input order).
/// A detection never matches a ground truth of a different class.
pub fn match_detections(
    dets: &[Detection],
    gts: &[GroundTruth],
    iou_threshold: f64,
) -> Vec<MatchedDetection> {
    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_by(|&i, &j| dets[j].confidence().total_cmp(&dets[i].confidence()));

    let mut taken = alloc::vec![false; gts.len()];
    order
        .into_iter()
        .map(|i| {
            let det = &dets[i];
            let mut best: Option<(usize, f64)> = None;
            for (g, gt) in gts.iter().enumerate() {
                if taken[g] || gt.class_label != det.class_label {
                    continue;
                }
                let overlap = iou(&det.bbox, &gt.bbox);
                if best.is_none_or(|(_, b)| overlap > b) {
                    best = Some((g, overlap));
                }
            }
            let matched_gt = match best {
                Some((g, overlap)) if overlap >= iou_threshold => {
                    taken[g] = true;
                    Some(g)
                }
                _ => None,
            };
            MatchedDetection {
                index: i,
                confidence: det.confidence(),
                label: if matched_gt.is_some() {
                    MatchLabel::TruePositive
                } else {
                    MatchLabel::FalsePositive
                },
                matched_gt,
            }
        })
        .collect()
}

/// All-point interpolated AP over a confidence-ordered TP/FP list. Recall is
/// capped at 1 if the list holds more true positives than ground truths.
pub fn average_precision(labels: &[MatchLabel], num_gt: usize) -> Result<f64, EvalError> {
    if num_gt == 0 {
        return Err(EvalError::ZeroGroundTruth);
    }
    let mut precision = Vec::with_capacity(labels.len());
    let mut recall = Vec::with_capacity(labels.len());
    let mut tp = 0usize;
    for (i, label) in labels.iter().enumerate() {
        if *label == MatchLabel::TruePositive {
            tp += 1;
        }
        precision.push(tp as f64 / (i + 1) as f64);
        recall.push(tp.min(num_gt) as f64 / num_gt as f64);
    }
    for i in (0..precision.len().saturating_sub(1)).rev() {
        precision[i] = precision[i].max(precision[i + 1]);
    }
    let mut ap = 0.0;
    let mut prev_recall = 0.0;
    for (p, r) in precision.iter().zip(&recall) {
        if *r > prev_recall {
            ap += (r - prev_recall) * p;
            prev_recall = *r;
        }
    }
    Ok(ap.clamp(0.0, 1.0))
}

/// Detections and annotations of one image.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalImage {
    pub detections: Vec<Detection>,
    pub ground_truths: Vec<GroundTruth>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ClassCounts {
    pub num_gt: usize,
    pub num_det: usize,
    pub tp: usize,
    pub fp: usize,
    #[cfg_attr(feature = "serde", serde(rename = "fn"))]
    pub fn_: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EvalReport {
    pub iou_threshold: f64,
    /// Per-class AP, only for classes with at least one ground truth.
    pub ap: BTreeMap<String, f64>,
    /// Mean of `ap`; 0 when no class has ground truth.
    pub map_50: f64,
    /// Every class seen in either detections or ground truth.
    pub counts: BTreeMap<String, ClassCounts>,
}

struct Scored {
    confidence: f64,
    image: usize,
    index: usize,
    label: MatchLabel,
}

pub fn evaluate(images: &[EvalImage], iou_threshold: f64) -> Result<EvalReport, EvalError> {
    if images.is_empty() {
        return Err(EvalError::EmptyDataset);
    }
    if !(iou_threshold > 0.0 && iou_threshold <= 1.0) {
        return Err(EvalError::InvalidIouThreshold(iou_threshold));
    }

    let mut pooled: BTreeMap<String, Vec<Scored>> = BTreeMap::new();
    let mut counts: BTreeMap<String, ClassCounts> = BTreeMap::new();

    for (image, img) in images.iter().enumerate() {
        for gt in &img.ground_truths {
            counts.entry(gt.class_label.clone()).or_default().num_gt += 1;
        }
        for det in &img.detections {
            counts.entry(det.class_label.clone()).or_default().num_det += 1;
        }
        // match_detections never crosses classes, so one pass per image
        // covers every class at once.
        for m in match_detections(&img.detections, &img.ground_truths, iou_threshold) {
            let class = &img.detections[m.index].class_label;
            pooled.entry(class.clone()).or_default().push(Scored {
                confidence: m.confidence,
                image,
                index: m.index,
                label: m.label,
            });
        }
    }

    let mut ap = BTreeMap::new();
    for (class, c) in counts.iter_mut() {
        let mut scored = pooled.remove(class).unwrap_or_default();
        scored.sort_by(|a, b| {
            b.confidence
                .total_cmp(&a.confidence)
                .then(a.image.cmp(&b.image))
                .then(a.index.cmp(&b.index))
        });
        let labels: Vec<MatchLabel> = scored.iter().map(|s| s.label).collect();
        c.tp = labels
            .iter()
            .filter(|l| **l == MatchLabel::TruePositive)
            .count();
        c.fp = labels.len() - c.tp;
        c.fn_ = c.num_gt - c.tp;
        if c.num_gt > 0 {
            ap.insert(class.clone(), average_precision(&labels, c.num_gt)?);
        }
    }
    let map_50 = if ap.is_empty() {
        0.0
    } else {
        ap.values().sum::<f64>() / ap.len() as f64
    };
    Ok(EvalReport {
        iou_threshold,
        ap,
        map_50,
        counts,
    })
}
