use std::path::{Path, PathBuf};

use anyhow::Context as _;
use desws_core::generate;
use serde::Serialize;

use super::to_json;
use crate::ingestion::{
    parse_scene, write_detections, write_label_file, ClassRef, DetectionRecord, DetectionSet,
    LabelEntry, LabelFile, PipelineConfig,
};
use crate::{fmt_g, input, internal, CliError, Format};

pub const TRUTH_HEADER: &str = "index,class,distance_m,real_width_m,pixel_width,clamped";

/// The three generated files, relative to the output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulateOutput {
    pub image_id: String,
    pub labels: String,
    pub detections: String,
    pub truth: String,
    pub objects: usize,
    pub clamped: usize,
}

#[derive(Serialize)]
struct SimulateSummary<'a> {
    image_id: &'a str,
    seed: u64,
    objects: usize,
    clamped: usize,
    files: [String; 3],
}

impl SimulateOutput {
    pub fn label_path(&self) -> PathBuf {
        Path::new("labels").join(format!("{}.txt", self.image_id))
    }

    pub fn write_to(&self, out_dir: &Path) -> Result<(), CliError> {
        let write = |rel: &Path, text: &str| -> Result<(), CliError> {
            let path = out_dir.join(rel);
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent)
                    .with_context(|| format!("cannot create {}", parent.display()))
                    .map_err(CliError::Input)?;
            }
            std::fs::write(&path, text)
                .with_context(|| format!("cannot write {}", path.display()))
                .map_err(CliError::Input)
        };
        write(&self.label_path(), &self.labels)?;
        write(Path::new("detections.json"), &self.detections)?;
        write(Path::new("truth.csv"), &self.truth)
    }
}

/// Generates the scene and renders the summary report.
pub fn cmd_simulate(
    config: &PipelineConfig,
    scene_json: &str,
    seed: u64,
    format: Format,
) -> Result<(String, SimulateOutput), CliError> {
    let spec = parse_scene(scene_json)
        .and_then(|s| s.to_spec(config))
        .map_err(input)?;
    let scene = generate(&spec, seed).map_err(input)?;
    let (w, h) = (scene.camera.image_width_px, scene.camera.image_height_px);

    let mut entries = Vec::with_capacity(scene.ground_truths.len());
    for gt in &scene.ground_truths {
        let class_index = config
            .class_names
            .iter()
            .position(|c| *c == gt.class_label)
            .ok_or_else(|| internal(anyhow::anyhow!("class `{}` vanished", gt.class_label)))?;
        entries.push(LabelEntry::from_bbox(class_index, &gt.bbox, w, h));
    }
    let labels = write_label_file(&LabelFile {
        image_id: scene.image_id.clone(),
        image_size: Some((w, h)),
        entries,
    });

    let mut set = DetectionSet::default();
    for d in &scene.detections {
        set.push(DetectionRecord {
            image_id: scene.image_id.clone(),
            class: ClassRef::Name(d.class_label.clone()),
            bbox: d.bbox,
            confidence: d.confidence(),
        });
    }
    let detections = write_detections(&set);

    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(TRUTH_HEADER.split(',')).map_err(internal)?;
    for t in &scene.truth {
        wtr.write_record([
            t.index.to_string(),
            t.class_label.clone(),
            t.distance_m.to_string(),
            t.real_width_m.to_string(),
            t.pixel_width.to_string(),
            t.clamped.to_string(),
        ])
        .map_err(internal)?;
    }
    let truth = String::from_utf8(wtr.into_inner().map_err(internal)?).map_err(internal)?;

    let out = SimulateOutput {
        image_id: scene.image_id.clone(),
        labels,
        detections,
        truth,
        objects: scene.truth.len(),
        clamped: scene.truth.iter().filter(|t| t.clamped).count(),
    };
    let files = [
        out.label_path().display().to_string(),
        "detections.json".to_string(),
        "truth.csv".to_string(),
    ];
    let report = match format {
        Format::Json => to_json(&SimulateSummary {
            image_id: &out.image_id,
            seed,
            objects: out.objects,
            clamped: out.clamped,
            files,
        })?,
        Format::Text => format!(
            "image_id {}\nseed {seed}\nobjects {}\nclamped {}\nfocal_length_px {}\nfiles {}\n",
            out.image_id,
            out.objects,
            out.clamped,
            fmt_g(scene.camera.focal_length_px),
            files.join(" ")
        ),
    };
    Ok((report, out))
}
