mod oracles;

use desws_core::geometry::{center_distance_sq, intersection_area};
use desws_core::{diou_loss, enclosing_rect, iou, BBox};
use oracles::{exact_diou, exact_iou, q_to_f64, rel_err, IntBox};
use proptest::prelude::*;

fn arb_box() -> impl Strategy<Value = BBox> {
    (-1e3..1e3f64, -1e3..1e3f64, 1e-2..5e2f64, 1e-2..5e2f64)
        .prop_map(|(x, y, w, h)| BBox::new(x, y, x + w, y + h).unwrap())
}

fn arb_grid_box() -> impl Strategy<Value = BBox> {
    (-32_000i32..32_000, -32_000i32..32_000, 1i32..16_000, 1i32..16_000).prop_map(|(x, y, w, h)| {
        let q = |v: i32| v as f64 / 64.0;
        BBox::new(q(x), q(y), q(x + w), q(y + h)).unwrap()
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #[test]
    fn loss_is_bounded(a in arb_box(), b in arb_box()) {
        let d = diou_loss(&a, &b).unwrap();
        prop_assert!((0.0..=1.0).contains(&d.iou));
        prop_assert!(d.penalty() >= 0.0 && d.penalty() < 1.0);
        prop_assert!(d.loss >= 0.0 && d.loss < 2.0);
        prop_assert_eq!(d.loss, 1.0 - d.iou + d.center_distance_sq / d.enclosing_diag_sq);
    }

    #[test]
    fn self_loss_is_zero(a in arb_box()) {
        prop_assert_eq!(diou_loss(&a, &a).unwrap().loss, 0.0);
    }

    #[test]
    fn symmetric(a in arb_box(), b in arb_box()) {
        prop_assert_eq!(iou(&a, &b), iou(&b, &a));
        prop_assert_eq!(diou_loss(&a, &b).unwrap().loss, diou_loss(&b, &a).unwrap().loss);
    }

    #[test]
    fn translation_invariant(a in arb_grid_box(), b in arb_grid_box(), dx in -4096i32..4096, dy in -4096i32..4096) {
        // Corners on a 1/64 grid shifted by whole pixels stay exact.
        let (dx, dy) = (dx as f64, dy as f64);
        let d0 = diou_loss(&a, &b).unwrap();
        let d1 = diou_loss(&a.translate(dx, dy).unwrap(), &b.translate(dx, dy).unwrap()).unwrap();
        prop_assert!(close(d0.iou, d1.iou, 1e-12));
        prop_assert!(close(d0.loss, d1.loss, 1e-12));
        prop_assert!(close(d0.center_distance_sq, d1.center_distance_sq, 1e-12));
        prop_assert!(close(d0.enclosing_diag_sq, d1.enclosing_diag_sq, 1e-12));
    }

    #[test]
    fn scale_invariant_ratios(a in arb_box(), b in arb_box(), e in -10i32..10) {
        // Power-of-two scales are exact, so the ratios must match to 1e-12.
        let s = 2f64.powi(e);
        let d0 = diou_loss(&a, &b).unwrap();
        let d1 = diou_loss(&a.scale(s).unwrap(), &b.scale(s).unwrap()).unwrap();
        prop_assert!(close(d0.iou, d1.iou, 1e-12));
        prop_assert!(close(d0.penalty(), d1.penalty(), 1e-12));
    }

    #[test]
    fn scale_invariant_ratios_general(a in arb_box(), b in arb_box(), s in 0.1..10.0f64) {
        let d0 = diou_loss(&a, &b).unwrap();
        let d1 = diou_loss(&a.scale(s).unwrap(), &b.scale(s).unwrap()).unwrap();
        prop_assert!(close(d0.iou, d1.iou, 1e-9));
        prop_assert!(close(d0.penalty(), d1.penalty(), 1e-9));
    }

    #[test]
    fn enclosing_contains_both(a in arb_box(), b in arb_box()) {
        let e = enclosing_rect(&a, &b);
        for bx in [a, b] {
            prop_assert!(e.x_min() <= bx.x_min() && e.y_min() <= bx.y_min());
            prop_assert!(e.x_max() >= bx.x_max() && e.y_max() >= bx.y_max());
        }
        prop_assert!(intersection_area(&a, &b) <= a.area().min(b.area()));
        prop_assert!(center_distance_sq(&a, &b) >= 0.0);
    }
}

#[test]
fn matches_rational_oracle_on_sampled_grid() {
    // Every box with integer corners in [-8, 8] on a stride-2 lattice,
    // paired with every box at stride 3 offset by one.
    let lattice = |step: i64, start: i64| -> Vec<IntBox> {
        let coords: Vec<i64> = (start..=8).step_by(step as usize).collect();
        let mut out = Vec::new();
        for &x0 in &coords {
            for &x1 in coords.iter().filter(|&&x| x > x0) {
                for &y0 in &coords {
                    for &y1 in coords.iter().filter(|&&y| y > y0) {
                        out.push(IntBox(x0, y0, x1, y1));
                    }
                }
            }
        }
        out
    };
    let left = lattice(2, -8);
    let right = lattice(3, -7);
    let mut pairs = 0;
    for &a in &left {
        for &b in &right {
            let exact = exact_diou(a, b).unwrap();
            let got = diou_loss(&a.to_bbox(), &b.to_bbox()).unwrap();
            assert!(rel_err(got.iou, q_to_f64(exact.iou)) <= 1e-12);
            assert!(rel_err(got.loss, q_to_f64(exact.loss)) <= 1e-12);
            assert_eq!(got.center_distance_sq, q_to_f64(exact.center_distance_sq));
            assert_eq!(got.enclosing_diag_sq, q_to_f64(exact.enclosing_diag_sq));
            assert_eq!(iou(&a.to_bbox(), &b.to_bbox()), iou(&b.to_bbox(), &a.to_bbox()));
            assert!(rel_err(iou(&a.to_bbox(), &b.to_bbox()), q_to_f64(exact_iou(a, b))) <= 1e-12);
            pairs += 1;
        }
    }
    assert!(pairs > 10_000, "{pairs}");
}
