use std::fmt::Write as _;

use desws_core::{classify, estimate_distance, Detection, DistanceError, Verdict};
use serde::Serialize;

use super::to_json;
use crate::ingestion::{parse_detections, PipelineConfig};
use crate::{fmt_g, input, internal, CliError, Format};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionEntry {
    pub image_id: String,
    /// Position of the record among the records of its image, in input order.
    pub index: usize,
    pub class: String,
    pub bbox: [f64; 4],
    pub confidence: f64,
    pub pixel_width: f64,
    pub real_width_m: f64,
    pub distance_m: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedEntry {
    pub image_id: String,
    pub index: usize,
    pub class: String,
    /// `UnknownClass` or `ZeroPixelWidth`.
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub images: usize,
    pub detections: usize,
    pub estimated: usize,
    pub skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dangerous: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub safe: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub detections: Vec<DetectionEntry>,
    pub skipped: Vec<SkippedEntry>,
    pub summary: Summary,
    pub config: PipelineConfig,
}

pub fn cmd_estimate(
    config: &PipelineConfig,
    detections_json: &str,
    format: Format,
) -> Result<String, CliError> {
    let report = run(config, detections_json, false)?;
    render(&report, format)
}

/// [`cmd_estimate`] plus a verdict per detection at `danger_threshold_m`.
pub fn cmd_warn(
    config: &PipelineConfig,
    detections_json: &str,
    format: Format,
) -> Result<String, CliError> {
    let report = run(config, detections_json, true)?;
    render(&report, format)
}

pub(crate) fn run(
    config: &PipelineConfig,
    detections_json: &str,
    with_verdicts: bool,
) -> Result<RunReport, CliError> {
    let set = parse_detections(detections_json).map_err(input)?;
    let camera = config.camera();
    let widths = config.width_table();

    let mut detections = Vec::new();
    let mut skipped = Vec::new();
    for (image_id, records) in &set.images {
        for (index, rec) in records.iter().enumerate() {
            let skip = |reason| SkippedEntry {
                image_id: image_id.clone(),
                index,
                class: rec.class.to_string(),
                reason,
            };
            let Some(class) = rec.class.resolve(&config.class_names) else {
                skipped.push(skip("UnknownClass"));
                continue;
            };
            let det = Detection::new(class.clone(), rec.bbox, rec.confidence).map_err(internal)?;
            let est = match estimate_distance(&camera, &widths, &det) {
                Ok(e) => e,
                Err(DistanceError::UnknownClass(_)) => {
                    skipped.push(skip("UnknownClass"));
                    continue;
                }
                Err(DistanceError::ZeroPixelWidth) => {
                    skipped.push(skip("ZeroPixelWidth"));
                    continue;
                }
                Err(e) => return Err(internal(e)),
            };
            let verdict = if with_verdicts {
                Some(
                    classify(est.distance_m, config.danger_threshold_m)
                        .map_err(internal)?
                        .verdict,
                )
            } else {
                None
            };
            let b = rec.bbox;
            detections.push(DetectionEntry {
                image_id: image_id.clone(),
                index,
                class,
                bbox: [b.x_min(), b.y_min(), b.x_max(), b.y_max()],
                confidence: rec.confidence,
                pixel_width: est.pixel_width,
                real_width_m: est.real_width_m,
                distance_m: est.distance_m,
                verdict,
            });
        }
    }

    let count = |v: Verdict| {
        with_verdicts.then(|| detections.iter().filter(|d| d.verdict == Some(v)).count())
    };
    let summary = Summary {
        images: set.images.len(),
        detections: set.len(),
        estimated: detections.len(),
        skipped: skipped.len(),
        dangerous: count(Verdict::Dangerous),
        safe: count(Verdict::Safe),
    };
    if summary.estimated + summary.skipped != summary.detections {
        return Err(internal(anyhow::anyhow!("detection bookkeeping mismatch")));
    }
    Ok(RunReport {
        command: if with_verdicts { "warn" } else { "estimate" },
        detections,
        skipped,
        summary,
        config: config.clone(),
    })
}

fn render(report: &RunReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => to_json(report),
        Format::Text => Ok(render_text(report)),
    }
}

fn render_text(r: &RunReport) -> String {
    let mut out = String::new();
    let verdicts = r.command == "warn";
    out.push_str("image_id\tindex\tclass\tconfidence\tx_min\ty_min\tx_max\ty_max\tpixel_width\treal_width_m\tdistance_m");
    if verdicts {
        out.push_str("\tverdict");
    }
    out.push('\n');
    for d in &r.detections {
        let _ = write!(out, "{}\t{}\t{}\t{}", d.image_id, d.index, d.class, fmt_g(d.confidence));
        for v in d.bbox {
            let _ = write!(out, "\t{}", fmt_g(v));
        }
        let _ = write!(
            out,
            "\t{}\t{}\t{}",
            fmt_g(d.pixel_width),
            fmt_g(d.real_width_m),
            fmt_g(d.distance_m)
        );
        if let Some(v) = d.verdict {
            let _ = write!(out, "\t{v:?}");
        }
        out.push('\n');
    }
    if !r.skipped.is_empty() {
        out.push_str("\nskipped\nimage_id\tindex\tclass\treason\n");
        for s in &r.skipped {
            let _ = writeln!(out, "{}\t{}\t{}\t{}", s.image_id, s.index, s.class, s.reason);
        }
    }
    let s = &r.summary;
    let _ = write!(
        out,
        "\nimages {}\ndetections {}\nestimated {}\nskipped {}\n",
        s.images, s.detections, s.estimated, s.skipped
    );
    if let (Some(d), Some(sf)) = (s.dangerous, s.safe) {
        let _ = write!(out, "dangerous {d}\nsafe {sf}\n");
    }
    let c = &r.config;
    let _ = write!(
        out,
        "focal_length_px {}\ndanger_threshold_m {}\n",
        fmt_g(c.focal_length_px),
        fmt_g(c.danger_threshold_m)
    );
    out
}
