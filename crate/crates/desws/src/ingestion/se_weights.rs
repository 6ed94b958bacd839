//! SE excitation weights (JSON). Matrices are arrays of rows:
//!
//! ```json
//! {"channels": 4, "reduction_ratio": 2,
//!  "w1": [[...4 values...], [...]], "b1": [0, 0],
//!  "w2": [[...2 values...], ... 4 rows], "b2": [0, 0, 0, 0]}
//! ```

use desws_core::SeWeights;
use serde::{Deserialize, Serialize};

use super::{schema, IngestError};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsDoc {
    channels: usize,
    reduction_ratio: usize,
    w1: Vec<Vec<f64>>,
    b1: Vec<f64>,
    w2: Vec<Vec<f64>>,
    b2: Vec<f64>,
}

fn flatten(path: &str, rows: Vec<Vec<f64>>, nrows: usize, ncols: usize) -> Result<Vec<f64>, IngestError> {
    if rows.len() != nrows {
        return Err(schema(path, format!("expected {nrows} rows, found {}", rows.len())));
    }
    let mut out = Vec::with_capacity(nrows * ncols);
    for (i, row) in rows.into_iter().enumerate() {
        if row.len() != ncols {
            return Err(schema(
                format!("{path}[{i}]"),
                format!("expected {ncols} columns, found {}", row.len()),
            ));
        }
        out.extend(row);
    }
    Ok(out)
}

pub fn parse_se_weights(text: &str) -> Result<SeWeights, IngestError> {
    let doc: WeightsDoc = serde_json::from_str(text)
        .map_err(|e| schema("$", format!("line {} column {}: {e}", e.line(), e.column())))?;
    let c = doc.channels;
    let r = doc.reduction_ratio;
    if c == 0 || r == 0 || !c.is_multiple_of(r) {
        return Err(schema("$.reduction_ratio", format!("must be positive and divide channels ({c})")));
    }
    let hidden = c / r;
    let w1 = flatten("$.w1", doc.w1, hidden, c)?;
    let w2 = flatten("$.w2", doc.w2, c, hidden)?;
    SeWeights::new(c, r, w1, doc.b1, w2, doc.b2).map_err(|e| schema("$", e.to_string()))
}

pub fn write_se_weights(w: &SeWeights) -> String {
    let hidden = w.hidden();
    let c = w.channels();
    let doc = WeightsDoc {
        channels: c,
        reduction_ratio: w.reduction_ratio(),
        w1: w.w1().chunks(c).map(<[f64]>::to_vec).collect(),
        b1: w.b1().to_vec(),
        w2: w.w2().chunks(hidden).map(<[f64]>::to_vec).collect(),
        b2: w.b2().to_vec(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain numbers serialize");
    s.push('\n');
    s
}
