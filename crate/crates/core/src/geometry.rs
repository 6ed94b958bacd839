//! Axis-aligned box arithmetic and the DIoU loss.
//!
//! Boxes are stored as corner pairs `(x_min, y_min, x_max, y_max)` in pixel
//! coordinates. Zero-width and zero-height boxes are valid; negative extents
//! and non-finite coordinates are rejected when a box is built.

use core::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("box coordinate is not finite")]
    NonFinite,
    #[error("box has negative {axis} extent")]
    NegativeExtent { axis: &'static str },
    /// Both boxes collapse to the same point, so the enclosing diagonal is
    /// zero and the DIoU penalty term is undefined.
    #[error("enclosing rectangle has zero diagonal")]
    DegenerateGeometry,
}

/// Axis-aligned rectangle in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BBox {
    x_min: f64,
    y_min: f64,
    x_max: f64,
    y_max: f64,
}

impl BBox {
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> Result<Self, GeometryError> {
        if !(x_min.is_finite() && y_min.is_finite() && x_max.is_finite() && y_max.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if x_min > x_max {
            return Err(GeometryError::NegativeExtent { axis: "x" });
        }
        if y_min > y_max {
            return Err(GeometryError::NegativeExtent { axis: "y" });
        }
        Ok(Self {
            x_min,
            y_min,
            x_max,
            y_max,
        })
    }

    /// Builds a box from its center and size.
    pub fn from_center_size(
        cx: f64,
        cy: f64,
        width: f64,
        height: f64,
    ) -> Result<Self, GeometryError> {
        let (hw, hh) = (width / 2.0, height / 2.0);
        Self::new(cx - hw, cy - hh, cx + hw, cy + hh)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn y_min(&self) -> f64 {
        self.y_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn y_max(&self) -> f64 {
        self.y_max
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> (f64, f64) {
        (
            (self.x_min + self.x_max) / 2.0,
            (self.y_min + self.y_max) / 2.0,
        )
    }

    /// True when the box has zero width or zero height.
    pub fn is_degenerate(&self) -> bool {
        self.x_min == self.x_max || self.y_min == self.y_max
    }

    pub fn translate(&self, dx: f64, dy: f64) -> Result<Self, GeometryError> {
        Self::new(
            self.x_min + dx,
            self.y_min + dy,
            self.x_max + dx,
            self.y_max + dy,
        )
    }

    pub fn scale(&self, s: f64) -> Result<Self, GeometryError> {
        Self::new(
            self.x_min * s,
            self.y_min * s,
            self.x_max * s,
            self.y_max * s,
        )
    }

    /// Clips the box to `[0, width] x [0, height]`. Returns the clipped box
    /// and whether any edge moved.
    pub fn clamp_to(&self, width: f64, height: f64) -> (Self, bool) {
        let x_min = self.x_min.clamp(0.0, width);
        let y_min = self.y_min.clamp(0.0, height);
        let x_max = self.x_max.clamp(0.0, width);
        let y_max = self.y_max.clamp(0.0, height);
        let moved =
            x_min != self.x_min || y_min != self.y_min || x_max != self.x_max || y_max != self.y_max;
        (
            Self {
                x_min,
                y_min,
                x_max,
                y_max,
            },
            moved,
        )
    }
}

impl fmt::Display for BBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.x_min, self.y_min, self.x_max, self.y_max
        )
    }
}

pub fn area(b: &BBox) -> f64 {
    b.area()
}

pub fn intersection_area(a: &BBox, b: &BBox) -> f64 {
    let w = a.x_max.min(b.x_max) - a.x_min.max(b.x_min);
    let h = a.y_max.min(b.y_max) - a.y_min.max(b.y_min);
    if w <= 0.0 || h <= 0.0 {
        0.0
    } else {
        w * h
    }
}

/// Intersection over union. Two zero-area boxes have IoU 0.
pub fn iou(a: &BBox, b: &BBox) -> f64 {
    let overlap = intersection_area(a, b);
    let union = a.area() + b.area() - overlap;
    if union <= 0.0 {
        return 0.0;
    }
    (overlap / union).clamp(0.0, 1.0)
}

/// Smallest axis-aligned rectangle containing both boxes.
pub fn enclosing_rect(a: &BBox, b: &BBox) -> BBox {
    BBox {
        x_min: a.x_min.min(b.x_min),
        y_min: a.y_min.min(b.y_min),
        x_max: a.x_max.max(b.x_max),
        y_max: a.y_max.max(b.y_max),
    }
}

/// Squared Euclidean distance between box centers.
pub fn center_distance_sq(a: &BBox, b: &BBox) -> f64 {
    // Doubled centers keep the subtraction exact for integer corners.
    let dx = (a.x_min + a.x_max) - (b.x_min + b.x_max);
    let dy = (a.y_min + a.y_max) - (b.y_min + b.y_max);
    (dx * dx + dy * dy) / 4.0
}

/// Components of the DIoU loss for one predicted/target pair.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DiouBreakdown {
    pub iou: f64,
    pub center_distance_sq: f64,
    pub enclosing_diag_sq: f64,
    pub loss: f64,
}

impl DiouBreakdown {
    /// `center_distance_sq / enclosing_diag_sq`.
    pub fn penalty(&self) -> f64 {
        self.center_distance_sq / self.enclosing_diag_sq
    }
}

/// `1 - IoU + d²/c²`, where `d` is the center distance and `c` the diagonal
/// of the enclosing rectangle.
pub fn diou_loss(pred: &BBox, target: &BBox) -> Result<DiouBreakdown, GeometryError> {
    let enclosing = enclosing_rect(pred, target);
    let (w, h) = (enclosing.width(), enclosing.height());
    let enclosing_diag_sq = w * w + h * h;
    if enclosing_diag_sq <= 0.0 {
        return Err(GeometryError::DegenerateGeometry);
    }
    let iou = iou(pred, target);
    let center_distance_sq = center_distance_sq(pred, target);
    Ok(DiouBreakdown {
        iou,
        center_distance_sq,
        enclosing_diag_sq,
        loss: 1.0 - iou + center_distance_sq / enclosing_diag_sq,
    })
}
