//! Independent reference implementations used only by tests.
//!
//! None of these call into the code paths they check: geometry runs in
//! exact rationals, the Mann-Whitney reference counts pairwise wins over
//! every subset, and the AP reference re-matches from scratch at every
//! confidence cut.
#![allow(dead_code, clippy::too_many_arguments)]

use desws_core::{BBox, Detection, EvalImage, GroundTruth};
use num_rational::Ratio;

pub type Q = Ratio<i64>;

#[derive(Debug, Clone, Copy)]
pub struct IntBox(pub i64, pub i64, pub i64, pub i64);

impl IntBox {
    pub fn to_bbox(self) -> BBox {
        BBox::new(self.0 as f64, self.1 as f64, self.2 as f64, self.3 as f64).unwrap()
    }

    fn area(self) -> i64 {
        (self.2 - self.0) * (self.3 - self.1)
    }
}

pub struct ExactDiou {
    pub iou: Q,
    pub center_distance_sq: Q,
    pub enclosing_diag_sq: Q,
    pub loss: Q,
}

pub fn exact_iou(a: IntBox, b: IntBox) -> Q {
    let w = (a.2.min(b.2) - a.0.max(b.0)).max(0);
    let h = (a.3.min(b.3) - a.1.max(b.1)).max(0);
    let overlap = w * h;
    let union = a.area() + b.area() - overlap;
    if union == 0 {
        Q::from_integer(0)
    } else {
        Q::new(overlap, union)
    }
}

pub fn exact_diou(a: IntBox, b: IntBox) -> Option<ExactDiou> {
    let ew = a.2.max(b.2) - a.0.min(b.0);
    let eh = a.3.max(b.3) - a.1.min(b.1);
    let diag = ew * ew + eh * eh;
    if diag == 0 {
        return None;
    }
    let half = Q::new(1, 2);
    let dx = (Q::from_integer(a.0 + a.2) - Q::from_integer(b.0 + b.2)) * half;
    let dy = (Q::from_integer(a.1 + a.3) - Q::from_integer(b.1 + b.3)) * half;
    let dc = dx * dx + dy * dy;
    let iou = exact_iou(a, b);
    let diag = Q::from_integer(diag);
    Some(ExactDiou {
        iou,
        center_distance_sq: dc,
        enclosing_diag_sq: diag,
        loss: Q::from_integer(1) - iou + dc / diag,
    })
}

pub fn q_to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

/// Twice the Mann-Whitney U of `a`, by direct pairwise comparison.
pub fn doubled_u_pairwise(a: &[f64], b: &[f64]) -> i64 {
    let mut u2 = 0;
    for x in a {
        for y in b {
            if x > y {
                u2 += 2;
            } else if x == y {
                u2 += 1;
            }
        }
    }
    u2
}

/// Calls `f` with every `k`-subset of `0..n` as a membership mask.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[bool])) {
    fn rec(
        pos: usize,
        left: usize,
        n: usize,
        mask: &mut Vec<bool>,
        f: &mut dyn FnMut(&[bool]),
    ) {
        if left == 0 {
            f(mask);
            return;
        }
        if n - pos < left {
            return;
        }
        mask[pos] = true;
        rec(pos + 1, left - 1, n, mask, f);
        mask[pos] = false;
        rec(pos + 1, left, n, mask, f);
    }
    let mut mask = vec![false; n];
    rec(0, k, n, &mut mask, &mut f);
}

/// Two-sided exact Mann-Whitney p-value by enumerating every way of
/// drawing `|a|` of the pooled values as group `a`. Returns
/// `(extreme, total)`.
pub fn mann_whitney_enumerated(a: &[f64], b: &[f64]) -> (u64, u64) {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n1 = a.len();
    let center = (a.len() * b.len()) as i64;
    let observed = (doubled_u_pairwise(a, b) - center).abs();
    let (mut extreme, mut total) = (0u64, 0u64);
    let (mut ga, mut gb) = (Vec::new(), Vec::new());
    for_each_subset(pooled.len(), n1, |mask| {
        ga.clear();
        gb.clear();
        for (v, &m) in pooled.iter().zip(mask) {
            if m {
                ga.push(*v)
            } else {
                gb.push(*v)
            }
        }
        total += 1;
        if (doubled_u_pairwise(&ga, &gb) - center).abs() >= observed {
            extreme += 1;
        }
    });
    (extreme, total)
}

/// Greedy matching written independently: repeatedly take the
/// highest-confidence remaining detection.
fn greedy_tp_count(dets: &[&Detection], gts: &[&GroundTruth], thr: f64) -> usize {
    let mut remaining: Vec<&Detection> = dets.to_vec();
    let mut used = vec![false; gts.len()];
    let mut tp = 0;
    while !remaining.is_empty() {
        let (pos, _) = remaining
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, d)| {
                if d.confidence() > acc.1 {
                    (i, d.confidence())
                } else {
                    acc
                }
            });
        let d = remaining.remove(pos);
        let mut best = None;
        let mut best_iou = f64::NEG_INFINITY;
        for (g, gt) in gts.iter().enumerate() {
            if used[g] {
                continue;
            }
            let v = box_iou(&d.bbox, &gt.bbox);
            if v > best_iou {
                best_iou = v;
                best = Some(g);
            }
        }
        if let Some(g) = best {
            if best_iou >= thr {
                used[g] = true;
                tp += 1;
            }
        }
    }
    tp
}

fn box_iou(a: &BBox, b: &BBox) -> f64 {
    let w = (a.x_max().min(b.x_max()) - a.x_min().max(b.x_min())).max(0.0);
    let h = (a.y_max().min(b.y_max()) - a.y_min().max(b.y_min())).max(0.0);
    let i = w * h;
    let u = a.width() * a.height() + b.width() * b.height() - i;
    if u <= 0.0 {
        0.0
    } else {
        i / u
    }
}

/// AP of one class by enumerating every confidence cut as an operating
/// point. Assumes distinct confidences within the class.
pub fn brute_force_ap(images: &[EvalImage], class: &str, thr: f64) -> Option<f64> {
    let num_gt: usize = images
        .iter()
        .map(|im| im.ground_truths.iter().filter(|g| g.class_label == class).count())
        .sum();
    if num_gt == 0 {
        return None;
    }
    let mut cuts: Vec<f64> = images
        .iter()
        .flat_map(|im| im.detections.iter())
        .filter(|d| d.class_label == class)
        .map(|d| d.confidence())
        .collect();
    cuts.sort_by(|a, b| b.partial_cmp(a).unwrap());
    cuts.dedup();

    // (recall, precision) at every operating point
    let mut points = Vec::new();
    for &cut in &cuts {
        let mut tp = 0usize;
        let mut kept = 0usize;
        for im in images {
            let dets: Vec<&Detection> = im
                .detections
                .iter()
                .filter(|d| d.class_label == class && d.confidence() >= cut)
                .collect();
            let gts: Vec<&GroundTruth> = im
                .ground_truths
                .iter()
                .filter(|g| g.class_label == class)
                .collect();
            kept += dets.len();
            tp += greedy_tp_count(&dets, &gts, thr);
        }
        points.push((tp as f64 / num_gt as f64, tp as f64 / kept as f64));
    }

    let mut recalls: Vec<f64> = points.iter().map(|p| p.0).filter(|r| *r > 0.0).collect();
    recalls.sort_by(|a, b| a.partial_cmp(b).unwrap());
    recalls.dedup();
    let mut ap = 0.0;
    let mut prev = 0.0;
    for r in recalls {
        let best = points
            .iter()
            .filter(|p| p.0 >= r)
            .map(|p| p.1)
            .fold(0.0, f64::max);
        ap += (r - prev) * best;
        prev = r;
    }
    Some(ap)
}

/// Plain triple-loop SE forward pass on channel-major data.
pub fn se_reference(
    c: usize,
    h: usize,
    w: usize,
    x: &[f64],
    r: usize,
    w1: &[f64],
    b1: &[f64],
    w2: &[f64],
    b2: &[f64],
) -> Vec<f64> {
    let hidden = c / r;
    let mut z = vec![0.0; c];
    for ch in 0..c {
        let mut s = 0.0;
        for i in 0..h {
            for j in 0..w {
                s += x[(ch * h + i) * w + j];
            }
        }
        z[ch] = s / (h * w) as f64;
    }
    let mut a = vec![0.0; hidden];
    for k in 0..hidden {
        let mut s = b1[k];
        for ch in 0..c {
            s += w1[k * c + ch] * z[ch];
        }
        a[k] = if s > 0.0 { s } else { 0.0 };
    }
    let mut out = x.to_vec();
    for ch in 0..c {
        let mut s = b2[ch];
        for k in 0..hidden {
            s += w2[ch * hidden + k] * a[k];
        }
        let scale = 1.0 / (1.0 + (-s).exp());
        for v in &mut out[ch * h * w..(ch + 1) * h * w] {
            *v *= scale;
        }
    }
    out
}

pub fn seeded_box(rng: &mut impl rand::Rng) -> BBox {
    let x0: f64 = rng.random_range(-500.0..500.0);
    let y0: f64 = rng.random_range(-500.0..500.0);
    let w: f64 = rng.random_range(0.5..300.0);
    let h: f64 = rng.random_range(0.5..300.0);
    BBox::new(x0, y0, x0 + w, y0 + h).unwrap()
}

/// Seeded multi-image, two-class dataset with distinct confidences in
/// `[0.05, 0.95]`. Detections are jittered copies of ground truth plus
/// scattered false alarms, at most `max_det_per_class` per class overall.
pub fn random_dataset(seed: u64, images: usize, max_det_per_class: usize) -> Vec<EvalImage> {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let classes = ["car", "person"];
    let total_dets = max_det_per_class * classes.len();
    let mut confidences: Vec<f64> = (0..total_dets)
        .map(|i| 0.05 + 0.9 * (i as f64 + 0.5) / total_dets as f64)
        .collect();
    confidences.shuffle(&mut rng);

    let mut out: Vec<EvalImage> = (0..images).map(|_| EvalImage::default()).collect();
    for class in classes {
        for _ in 0..max_det_per_class {
            let img = rng.random_range(0..images);
            let conf = confidences.pop().unwrap();
            let gt_count = out[img]
                .ground_truths
                .iter()
                .filter(|g| g.class_label == class)
                .count();
            let roll: f64 = rng.random();
            let bbox = if roll < 0.5 || gt_count == 0 {
                // fresh object, 2/3 of the time annotated
                let x: f64 = rng.random_range(0.0..900.0);
                let y: f64 = rng.random_range(0.0..500.0);
                let b = BBox::new(x, y, x + rng.random_range(20.0..80.0), y + rng.random_range(20.0..80.0)).unwrap();
                if rng.random_bool(2.0 / 3.0) {
                    out[img].ground_truths.push(GroundTruth::new(class, b));
                }
                let j = rng.random_range(-6.0..6.0);
                BBox::new(b.x_min() + j, b.y_min(), b.x_max() + j, b.y_max()).unwrap()
            } else {
                // re-detect an existing annotation (duplicates become FPs)
                let g = out[img]
                    .ground_truths
                    .iter()
                    .filter(|g| g.class_label == class)
                    .nth(rng.random_range(0..gt_count))
                    .unwrap()
                    .bbox;
                let j = rng.random_range(-15.0..15.0);
                BBox::new(g.x_min() + j, g.y_min(), g.x_max() + j, g.y_max()).unwrap()
            };
            out[img].detections.push(Detection::new(class, bbox, conf).unwrap());
        }
        // an unseen annotation now and then
        if rng.random_bool(0.5) {
            let img = rng.random_range(0..images);
            out[img].ground_truths.push(GroundTruth::new(
                class,
                BBox::new(950.0, 550.0, 990.0, 590.0).unwrap(),
            ));
        }
    }
    out
}

/// Hand-built three-image, two-class fixture with distinct confidences.
pub fn three_image_fixture() -> Vec<EvalImage> {
    let b = |x0: f64, y0: f64, x1: f64, y1: f64| BBox::new(x0, y0, x1, y1).unwrap();
    let d = |c: &str, bb: BBox, p: f64| Detection::new(c, bb, p).unwrap();
    vec![
        EvalImage {
            ground_truths: vec![
                GroundTruth::new("car", b(0.0, 0.0, 100.0, 50.0)),
                GroundTruth::new("car", b(200.0, 0.0, 300.0, 50.0)),
                GroundTruth::new("person", b(400.0, 0.0, 420.0, 60.0)),
            ],
            detections: vec![
                d("car", b(5.0, 0.0, 100.0, 50.0), 0.95),
                d("car", b(0.0, 0.0, 60.0, 50.0), 0.40),
                d("car", b(205.0, 5.0, 300.0, 50.0), 0.70),
                d("person", b(400.0, 0.0, 421.0, 60.0), 0.90),
            ],
        },
        EvalImage {
            ground_truths: vec![
                GroundTruth::new("car", b(50.0, 50.0, 150.0, 120.0)),
                GroundTruth::new("person", b(10.0, 10.0, 30.0, 70.0)),
                GroundTruth::new("person", b(600.0, 10.0, 625.0, 80.0)),
            ],
            detections: vec![
                d("car", b(300.0, 300.0, 380.0, 360.0), 0.85),
                d("car", b(55.0, 50.0, 150.0, 125.0), 0.60),
                d("person", b(12.0, 10.0, 30.0, 70.0), 0.35),
                d("person", b(700.0, 10.0, 725.0, 80.0), 0.80),
            ],
        },
        EvalImage {
            ground_truths: vec![GroundTruth::new("car", b(0.0, 0.0, 40.0, 40.0))],
            detections: vec![
                d("car", b(0.0, 0.0, 19.0, 40.0), 0.50),
                d("person", b(100.0, 100.0, 120.0, 160.0), 0.65),
            ],
        },
    ]
}
