//! Detector output as a JSON array of records:
//!
//! ```json
//! [{"image_id": "0001", "class": "car", "bbox": [x_min, y_min, x_max, y_max], "confidence": 0.9}]
//! ```
//!
//! `class` is either a class name or an integer index into the configured
//! class list.

use desws_core::BBox;
use serde_json::{Map, Value};

use super::{schema, IngestError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassRef {
    Index(u64),
    Name(String),
}

impl ClassRef {
    /// Class name under the given ordered class list, if it names one.
    pub fn resolve(&self, class_names: &[String]) -> Option<String> {
        match self {
            ClassRef::Index(i) => usize::try_from(*i)
                .ok()
                .and_then(|i| class_names.get(i))
                .cloned(),
            ClassRef::Name(n) => class_names.contains(n).then(|| n.clone()),
        }
    }
}

impl std::fmt::Display for ClassRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassRef::Index(i) => write!(f, "{i}"),
            ClassRef::Name(n) => f.write_str(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionRecord {
    pub image_id: String,
    pub class: ClassRef,
    pub bbox: BBox,
    pub confidence: f64,
}

/// Records grouped by image in order of first appearance; records within
/// an image keep their input order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DetectionSet {
    pub images: Vec<(String, Vec<DetectionRecord>)>,
}

impl DetectionSet {
    pub fn push(&mut self, record: DetectionRecord) {
        match self.images.iter_mut().find(|(id, _)| *id == record.image_id) {
            Some((_, recs)) => recs.push(record),
            None => self.images.push((record.image_id.clone(), vec![record])),
        }
    }

    pub fn len(&self) -> usize {
        self.images.iter().map(|(_, r)| r.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn records(&self) -> impl Iterator<Item = &DetectionRecord> {
        self.images.iter().flat_map(|(_, r)| r.iter())
    }
}

pub fn parse_detections(text: &str) -> Result<DetectionSet, IngestError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| schema("$", format!("invalid JSON at line {} column {}: {e}", e.line(), e.column())))?;
    let Value::Array(items) = value else {
        return Err(schema("$", "expected an array of detection records"));
    };
    let mut set = DetectionSet::default();
    for (i, item) in items.iter().enumerate() {
        set.push(parse_record(i, item)?);
    }
    Ok(set)
}

fn parse_record(i: usize, item: &Value) -> Result<DetectionRecord, IngestError> {
    let path = |field: &str| format!("$[{i}].{field}");
    let Value::Object(obj) = item else {
        return Err(schema(format!("$[{i}]"), "expected an object"));
    };
    if let Some(extra) = obj
        .keys()
        .find(|k| !matches!(k.as_str(), "image_id" | "class" | "bbox" | "confidence"))
    {
        return Err(schema(path(extra), "unknown field"));
    }
    let field = |obj: &Map<String, Value>, name: &str| -> Result<Value, IngestError> {
        obj.get(name)
            .cloned()
            .ok_or_else(|| schema(path(name), "missing field"))
    };

    let image_id = match field(obj, "image_id")? {
        Value::String(s) => s,
        _ => return Err(schema(path("image_id"), "expected a string")),
    };
    let class = match field(obj, "class")? {
        Value::String(s) => ClassRef::Name(s),
        Value::Number(n) => ClassRef::Index(
            n.as_u64()
                .ok_or_else(|| schema(path("class"), "class index must be a non-negative integer"))?,
        ),
        _ => return Err(schema(path("class"), "expected a class name or index")),
    };
    let coords = match field(obj, "bbox")? {
        Value::Array(a) if a.len() == 4 => a,
        _ => return Err(schema(path("bbox"), "expected [x_min, y_min, x_max, y_max]")),
    };
    let mut c = [0.0; 4];
    for (k, v) in coords.iter().enumerate() {
        c[k] = v
            .as_f64()
            .ok_or_else(|| schema(format!("$[{i}].bbox[{k}]"), "expected a number"))?;
    }
    let bbox = BBox::new(c[0], c[1], c[2], c[3]).map_err(|e| IngestError::InvalidBox {
        path: path("bbox"),
        reason: e.to_string(),
    })?;
    let confidence = field(obj, "confidence")?
        .as_f64()
        .ok_or_else(|| schema(path("confidence"), "expected a number"))?;
    if !(0.0..=1.0).contains(&confidence) {
        return Err(schema(
            path("confidence"),
            format!("{confidence} is outside [0, 1]"),
        ));
    }
    Ok(DetectionRecord {
        image_id,
        class,
        bbox,
        confidence,
    })
}

/// Serializes records in grouped order, one record per line.
pub fn write_detections(set: &DetectionSet) -> String {
    let lines: Vec<String> = set
        .records()
        .map(|r| {
            let class = match &r.class {
                ClassRef::Index(i) => Value::from(*i),
                ClassRef::Name(n) => Value::from(n.as_str()),
            };
            let b = &r.bbox;
            let v = serde_json::json!({
                "image_id": r.image_id,
                "class": class,
                "bbox": [b.x_min(), b.y_min(), b.x_max(), b.y_max()],
                "confidence": r.confidence,
            });
            format!("  {v}")
        })
        .collect();
    if lines.is_empty() {
        "[]\n".to_string()
    } else {
        format!("[\n{}\n]\n", lines.join(",\n"))
    }
}
