use desws_core::{diou_loss, BBox};
use serde_json::json;

use super::to_json;
use crate::{fmt_g, input, CliError, Format};

/// `coords` is `pred` then `target`, each `x_min y_min x_max y_max`.
pub fn cmd_diou(coords: [f64; 8], format: Format) -> Result<String, CliError> {
    let make = |c: &[f64]| BBox::new(c[0], c[1], c[2], c[3]);
    let pred = make(&coords[..4]).map_err(|e| input(anyhow::anyhow!("predicted box: {e}")))?;
    let target = make(&coords[4..]).map_err(|e| input(anyhow::anyhow!("target box: {e}")))?;
    let d = diou_loss(&pred, &target).map_err(input)?;
    let rows = [
        ("iou", d.iou),
        ("center_distance_sq", d.center_distance_sq),
        ("enclosing_diag_sq", d.enclosing_diag_sq),
        ("loss", d.loss),
    ];
    Ok(match format {
        Format::Text => rows
            .iter()
            .map(|(k, v)| format!("{k} {}\n", fmt_g(*v)))
            .collect(),
        Format::Json => to_json(&json!({
            "iou": d.iou,
            "center_distance_sq": d.center_distance_sq,
            "enclosing_diag_sq": d.enclosing_diag_sq,
            "loss": d.loss,
        }))?,
    })
}
