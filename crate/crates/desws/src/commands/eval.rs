use std::fmt::Write as _;
use std::path::Path;

use anyhow::Context as _;
use desws_core::{evaluate, Detection, EvalImage, EvalReport, GroundTruth};

use super::{bad_input, read_text, to_json};
use crate::ingestion::{parse_detections, parse_label_file, LabelFile, PipelineConfig};
use crate::{fmt_g, input, internal, CliError, Format};

pub struct EvalInput<'a> {
    pub labels: &'a [LabelFile],
    pub detections_json: &'a str,
    pub iou_threshold: f64,
    /// Used for label files without a `# size` directive.
    pub image_size: Option<(f64, f64)>,
}

/// Every `*.txt` file in `dir`, sorted by file name; the stem is the image id.
pub fn load_ground_truth(dir: &Path, num_classes: usize) -> Result<Vec<LabelFile>, CliError> {
    let entries = std::fs::read_dir(dir)
        .with_context(|| format!("cannot list {}", dir.display()))
        .map_err(CliError::Input)?;
    let mut paths = Vec::new();
    for e in entries {
        let path = e.map_err(input)?.path();
        if path.extension().is_some_and(|x| x == "txt") && path.is_file() {
            paths.push(path);
        }
    }
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            parse_label_file(&stem, &read_text(p)?, num_classes)
                .with_context(|| format!("in {}", p.display()))
                .map_err(CliError::Input)
        })
        .collect()
}

pub fn cmd_eval(
    config: &PipelineConfig,
    args: &EvalInput<'_>,
    format: Format,
) -> Result<String, CliError> {
    let report = run(config, args)?;
    match format {
        Format::Json => to_json(&report),
        Format::Text => Ok(render_text(&report)),
    }
}

pub(crate) fn run(config: &PipelineConfig, args: &EvalInput<'_>) -> Result<EvalReport, CliError> {
    let mut ids: Vec<String> = Vec::new();
    let mut images: Vec<EvalImage> = Vec::new();
    for file in args.labels {
        let Some((w, h)) = file.image_size.or(args.image_size) else {
            return Err(bad_input(format!(
                "label file `{}` has no `# size` line and no --image-size was given",
                file.image_id
            )));
        };
        let mut img = EvalImage::default();
        for (k, e) in file.entries.iter().enumerate() {
            let bbox = e
                .to_bbox(w, h)
                .map_err(|err| bad_input(format!("{} entry {}: {err}", file.image_id, k + 1)))?;
            img.ground_truths
                .push(GroundTruth::new(config.class_names[e.class_index].clone(), bbox));
        }
        ids.push(file.image_id.clone());
        images.push(img);
    }

    let set = parse_detections(args.detections_json).map_err(input)?;
    for (image_id, records) in &set.images {
        let slot = match ids.iter().position(|id| id == image_id) {
            Some(i) => i,
            None => {
                // Detections on an image without annotations are all false positives.
                ids.push(image_id.clone());
                images.push(EvalImage::default());
                images.len() - 1
            }
        };
        for (k, rec) in records.iter().enumerate() {
            let class = rec.class.resolve(&config.class_names).ok_or_else(|| {
                bad_input(format!("{image_id} detection {k}: unknown class `{}`", rec.class))
            })?;
            images[slot]
                .detections
                .push(Detection::new(class, rec.bbox, rec.confidence).map_err(internal)?);
        }
    }
    evaluate(&images, args.iou_threshold).map_err(input)
}

fn render_text(r: &EvalReport) -> String {
    let mut out = String::from("class\tgt\tdet\ttp\tfp\tfn\tap\n");
    for (class, c) in &r.counts {
        let ap = r.ap.get(class).map_or_else(|| "-".to_string(), |v| fmt_g(*v));
        let _ = writeln!(
            out,
            "{class}\t{}\t{}\t{}\t{}\t{}\t{ap}",
            c.num_gt, c.num_det, c.tp, c.fp, c.fn_
        );
    }
    let _ = writeln!(out, "\niou_threshold {}\nmap {}", fmt_g(r.iou_threshold), fmt_g(r.map_50));
    out
}
