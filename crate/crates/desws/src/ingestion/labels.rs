//! YOLO-style normalized ground-truth labels.
//!
//! One object per line, `class cx cy w h`, whitespace separated, with the
//! four geometry fields normalized to `[0, 1]` by the image size. Blank
//! lines and lines starting with `#` are ignored, except for the directive
//! `# size <width_px> <height_px>` which records the image dimensions.

use std::fmt::Write as _;

use desws_core::{BBox, GeometryError};

use super::IngestError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabelEntry {
    pub class_index: usize,
    pub cx: f64,
    pub cy: f64,
    pub width: f64,
    pub height: f64,
}

impl LabelEntry {
    /// Pixel-space corners for an image of the given size.
    pub fn to_bbox(&self, image_width: f64, image_height: f64) -> Result<BBox, GeometryError> {
        BBox::from_center_size(
            self.cx * image_width,
            self.cy * image_height,
            self.width * image_width,
            self.height * image_height,
        )
    }

    /// Inverse of [`LabelEntry::to_bbox`].
    pub fn from_bbox(class_index: usize, b: &BBox, image_width: f64, image_height: f64) -> Self {
        let (cx, cy) = b.center();
        Self {
            class_index,
            cx: cx / image_width,
            cy: cy / image_height,
            width: b.width() / image_width,
            height: b.height() / image_height,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelFile {
    pub image_id: String,
    /// `(width_px, height_px)` from the `# size` directive.
    pub image_size: Option<(f64, f64)>,
    pub entries: Vec<LabelEntry>,
}

pub fn parse_labels(text: &str, num_classes: usize) -> Result<Vec<LabelEntry>, IngestError> {
    Ok(parse_label_file("", text, num_classes)?.entries)
}

pub fn parse_label_file(
    image_id: &str,
    text: &str,
    num_classes: usize,
) -> Result<LabelFile, IngestError> {
    let mut entries = Vec::new();
    let mut image_size = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            let mut words = comment.split_whitespace();
            if words.next() == Some("size") {
                image_size = Some(parse_size(line, words.collect())?);
            }
            continue;
        }
        entries.push(parse_entry(line, trimmed, num_classes)?);
    }
    Ok(LabelFile {
        image_id: image_id.to_string(),
        image_size,
        entries,
    })
}

fn parse_size(line: usize, words: Vec<&str>) -> Result<(f64, f64), IngestError> {
    let malformed = |reason: &str| IngestError::MalformedLine {
        line,
        reason: reason.to_string(),
    };
    let [w, h] = words[..] else {
        return Err(malformed("size directive needs `# size <width> <height>`"));
    };
    let parse = |s: &str, field: &'static str| -> Result<f64, IngestError> {
        let v: f64 = s
            .parse()
            .map_err(|_| malformed(&format!("{field} `{s}` is not a number")))?;
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(IngestError::OutOfRangeField {
                line,
                field,
                value: v,
            })
        }
    };
    Ok((parse(w, "image_width")?, parse(h, "image_height")?))
}

fn parse_entry(line: usize, text: &str, num_classes: usize) -> Result<LabelEntry, IngestError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 5 {
        return Err(IngestError::MalformedLine {
            line,
            reason: format!("expected 5 fields `class cx cy w h`, found {}", fields.len()),
        });
    }
    let class_index: usize = fields[0].parse().map_err(|_| IngestError::MalformedLine {
        line,
        reason: format!("class `{}` is not a non-negative integer", fields[0]),
    })?;
    if class_index >= num_classes {
        return Err(IngestError::UnknownClassIndex {
            line,
            index: class_index,
            num_classes,
        });
    }
    const NAMES: [&str; 4] = ["cx", "cy", "width", "height"];
    let mut values = [0.0; 4];
    for (k, name) in NAMES.iter().enumerate() {
        let s = fields[k + 1];
        let v: f64 = s.parse().map_err(|_| IngestError::MalformedLine {
            line,
            reason: format!("{name} `{s}` is not a number"),
        })?;
        if !(0.0..=1.0).contains(&v) {
            return Err(IngestError::OutOfRangeField {
                line,
                field: name,
                value: v,
            });
        }
        values[k] = v;
    }
    Ok(LabelEntry {
        class_index,
        cx: values[0],
        cy: values[1],
        width: values[2],
        height: values[3],
    })
}

/// Writes the label format read by [`parse_label_file`]. Numbers use the
/// shortest representation that parses back to the same value.
pub fn write_label_file(file: &LabelFile) -> String {
    let mut out = String::new();
    if let Some((w, h)) = file.image_size {
        let _ = writeln!(out, "# size {w} {h}");
    }
    for e in &file.entries {
        let _ = writeln!(
            out,
            "{} {} {} {} {}",
            e.class_index, e.cx, e.cy, e.width, e.height
        );
    }
    out
}
