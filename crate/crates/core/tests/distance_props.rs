mod oracles;

use desws_core::{
    calibrate_focal, estimate_distance, generate, project, BBox, CameraModel, ClassWidthTable,
    Detection, ImageCamera, SceneObject, SceneSpec,
};
use oracles::rel_err;
use proptest::prelude::*;

fn det_with_width(class: &str, width: f64) -> Detection {
    Detection::new(class, BBox::new(0.0, 10.0, width, 40.0).unwrap(), 0.5).unwrap()
}

fn table(class: &str, w: f64) -> ClassWidthTable {
    let mut t = ClassWidthTable::new();
    t.insert(class, w).unwrap();
    t
}

fn open_camera(f: f64) -> ImageCamera {
    // Wide enough that no generated object is clipped.
    ImageCamera {
        focal_length_px: f,
        image_width_px: 8192.0,
        image_height_px: 8192.0,
    }
}

fn object(class: &str, w: f64, d: f64) -> SceneObject {
    SceneObject {
        class_label: class.into(),
        real_width_m: w,
        real_height_m: 0.5,
        distance_m: d,
        lateral_offset_m: 0.0,
    }
}

proptest! {
    #[test]
    fn project_then_estimate_round_trips(f in 100.0..2000.0f64, w in 0.1..4.0f64, d in 1.0..200.0f64) {
        let spec = SceneSpec { image_id: "p".into(), camera: open_camera(f), objects: vec![], noise_px_std: 0.0 };
        let p = project(&spec, &object("x", w, d)).unwrap();
        prop_assert!(!p.clamped);
        let cam = CameraModel::new(f).unwrap();
        let e = estimate_distance(&cam, &table("x", w), &Detection::new("x", p.bbox, 1.0).unwrap()).unwrap();
        prop_assert!(rel_err(e.distance_m, d) <= 1e-9);
        prop_assert!(rel_err(e.distance_m * e.pixel_width, f * e.real_width_m) <= 1e-9);
    }

    #[test]
    fn strictly_decreasing_in_pixel_width(p in 1.0..2000.0f64, dp in 1e-3..100.0f64) {
        let cam = CameraModel::new(700.0).unwrap();
        let t = table("car", 1.8);
        let near = estimate_distance(&cam, &t, &det_with_width("car", p)).unwrap();
        let far = estimate_distance(&cam, &t, &det_with_width("car", p + dp)).unwrap();
        prop_assert!(far.distance_m < near.distance_m);
    }

    #[test]
    fn linear_in_widths(p in 1.0..1000.0f64, w in 0.1..4.0f64) {
        let cam = CameraModel::new(900.0).unwrap();
        let base = estimate_distance(&cam, &table("c", w), &det_with_width("c", p)).unwrap().distance_m;
        let wide = estimate_distance(&cam, &table("c", 2.0 * w), &det_with_width("c", p)).unwrap().distance_m;
        let big = estimate_distance(&cam, &table("c", w), &det_with_width("c", 2.0 * p)).unwrap().distance_m;
        // Doubling is exact in binary floating point.
        prop_assert_eq!(wide, 2.0 * base);
        prop_assert_eq!(big, base / 2.0);
    }

    #[test]
    fn calibration_is_consistent(d in 0.5..100.0f64, w in 0.1..5.0f64, p in 1.0..2000.0f64) {
        let cam = calibrate_focal(d, w, p).unwrap();
        let e = estimate_distance(&cam, &table("k", w), &det_with_width("k", p)).unwrap();
        prop_assert!(rel_err(e.distance_m, d) <= 1e-12);
    }

    #[test]
    fn projection_width_decreases_with_distance(d in 0.5..100.0f64, dd in 1e-3..50.0f64) {
        let spec = SceneSpec { image_id: "p".into(), camera: open_camera(700.0), objects: vec![], noise_px_std: 0.0 };
        let a = project(&spec, &object("car", 1.8, d)).unwrap();
        let b = project(&spec, &object("car", 1.8, d + dd)).unwrap();
        prop_assert!(b.bbox.width() < a.bbox.width());
    }

    #[test]
    fn clamp_flag_iff_outside(d in 0.2..30.0f64, offset in -20.0..20.0f64) {
        let camera = ImageCamera { focal_length_px: 700.0, image_width_px: 1280.0, image_height_px: 720.0 };
        let spec = SceneSpec { image_id: "p".into(), camera, objects: vec![], noise_px_std: 0.0 };
        let mut obj = object("car", 1.8, d);
        obj.lateral_offset_m = offset;
        obj.real_height_m = 1.5;
        let p = project(&spec, &obj).unwrap();
        let u = p.unclamped;
        let outside = u.x_min() < 0.0 || u.y_min() < 0.0 || u.x_max() > 1280.0 || u.y_max() > 720.0;
        prop_assert_eq!(p.clamped, outside);
        prop_assert!(p.bbox.x_min() >= 0.0 && p.bbox.x_max() <= 1280.0);
    }
}

#[test]
fn zero_noise_generation_recovers_every_distance() {
    let widths = ClassWidthTable::with_defaults();
    let objects: Vec<SceneObject> = desws_core::DEFAULT_CLASSES
        .iter()
        .enumerate()
        .map(|(i, c)| object(c, widths.get(c).unwrap(), 4.0 + 7.5 * i as f64))
        .collect();
    let spec = SceneSpec {
        image_id: "s".into(),
        camera: open_camera(700.0),
        objects,
        noise_px_std: 0.0,
    };
    let g = generate(&spec, 3).unwrap();
    let cam = CameraModel::new(700.0).unwrap();
    for (d, t) in g.detections.iter().zip(&g.truth) {
        let e = estimate_distance(&cam, &widths, d).unwrap();
        assert!(rel_err(e.distance_m, t.distance_m) <= 1e-9);
    }
}

#[test]
fn width_noise_follows_first_order_propagation() {
    // dD/D = -dw/w, so |error| averages sigma * sqrt(2/pi) / w ≈ 1.27 %
    // for sigma = 2 px on a 126 px car.
    let objects = vec![object("car", 1.8, 10.0); 10_000];
    let spec = SceneSpec {
        image_id: "noise".into(),
        camera: open_camera(700.0),
        objects,
        noise_px_std: 2.0,
    };
    let g = generate(&spec, 2024).unwrap();
    let cam = CameraModel::new(700.0).unwrap();
    let widths = table("car", 1.8);
    let mean_abs_rel: f64 = g
        .detections
        .iter()
        .map(|d| rel_err(estimate_distance(&cam, &widths, d).unwrap().distance_m, 10.0))
        .sum::<f64>()
        / 10_000.0;
    assert!((0.01..=0.025).contains(&mean_abs_rel), "{mean_abs_rel}");
}
