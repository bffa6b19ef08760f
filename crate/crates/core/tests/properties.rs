use num_rational::Ratio;
use proptest::prelude::*;
use stereo_range::ranging::DEFAULT_KAPPA;
use stereo_range::report::{read_curve, write_curve, CurveKind, CurveRow};
use stereo_range::*;

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn camera(h: u32, fov_deg: f64) -> CameraModel {
    CameraModel::from_degrees(h, 480, fov_deg).unwrap()
}

proptest! {
    #[test]
    fn on_axis_disparity_is_focal_times_baseline_over_range(
        h in 64u32..4096, fov in 1.0f64..89.0, d in 0.05f64..5.0, z in 0.5f64..5000.0,
    ) {
        let rig = StereoRig::aligned(camera(h, fov), d).unwrap();
        let pair = project_pair(&rig, &WorldPoint::on_axis(z)).unwrap();
        let expected = rig.camera().focal_pixels() * d / z;
        prop_assert!(rel_diff(pair.disparity(), expected) < 1e-9);
        prop_assert!(pair.u_left > pair.u_right);
    }

    #[test]
    fn aligned_rig_is_rectified(
        d in 0.05f64..5.0, x in -50.0f64..50.0, y in -20.0f64..20.0, z in 0.5f64..1000.0,
    ) {
        let rig = StereoRig::aligned(camera(1920, 13.0), d).unwrap();
        let pair = project_pair(&rig, &WorldPoint::new(x, y, z)).unwrap();
        // one shared row coordinate; the right view computes it identically
        let f = rig.camera().focal_pixels();
        prop_assert_eq!(pair.v, 240.0 + f * y / z);
        prop_assert!(pair.u_left > pair.u_right);
    }

    #[test]
    fn disparity_decreases_with_range(d in 0.05f64..5.0, z in 0.5f64..1000.0, dz in 0.01f64..100.0) {
        let rig = StereoRig::aligned(camera(1920, 13.0), d).unwrap();
        let near = project_pair(&rig, &WorldPoint::on_axis(z)).unwrap().disparity();
        let far = project_pair(&rig, &WorldPoint::on_axis(z + dz)).unwrap().disparity();
        prop_assert!(far < near);
    }

    #[test]
    fn right_coordinate_monotone_in_yaw(a in -12.9f64..12.9, b in -12.9f64..12.9, z in 5.0f64..1000.0) {
        prop_assume!((a - b).abs() > 1e-6);
        let cam = camera(1920, 13.0);
        let u = |deg: f64| {
            let rig = StereoRig::new(cam, 1.14, deg.to_radians()).unwrap();
            project_pair(&rig, &WorldPoint::on_axis(z)).unwrap().u_right
        };
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        // negative yaw pushes the point right in the right view
        prop_assert!(u(lo) > u(hi));
    }

    #[test]
    fn quantized_disparity_within_one_pixel(
        d in 0.05f64..5.0, x in -20.0f64..20.0, z in 1.0f64..2000.0,
    ) {
        let rig = StereoRig::aligned(camera(1920, 13.0), d).unwrap();
        let pair = project_pair(&rig, &WorldPoint::new(x, 0.0, z)).unwrap();
        prop_assert!((pair.quantized_disparity() as f64 - pair.disparity()).abs() < 1.0);
    }

    #[test]
    fn range_times_disparity_is_constant(d in 0.05f64..5.0, fov in 1.0f64..89.0, h in 64u32..4096, n in 1i64..10_000) {
        let alpha = fov.to_radians();
        let c = range_from_disparity(d, h, alpha, Disparity(1)).unwrap().range_m;
        let r = range_from_disparity(d, h, alpha, Disparity(n)).unwrap().range_m;
        prop_assert!(rel_diff(r * n as f64, c) < 1e-9);
    }

    #[test]
    fn focal_and_fov_forms_agree(d in 0.05f64..5.0, fov in 1.0f64..89.0, h in 64u32..4096, n in 1i64..10_000) {
        let cam = camera(h, fov);
        let a = range_eq1(focal_pixels(&cam), d, Disparity(n)).unwrap();
        let b = range_from_disparity(d, h, cam.fov_rad(), Disparity(n)).unwrap().range_m;
        prop_assert!(rel_diff(a, b) < 1e-12);
    }

    #[test]
    fn sensitivity_threshold_is_tight(s in 1e-4f64..=0.5) {
        let n = min_reliable_disparity(s).unwrap();
        prop_assert!(quantization_error(Disparity(n)).unwrap() <= s);
        if n > 1 {
            prop_assert!(quantization_error(Disparity(n - 1)).unwrap() > s);
        }
    }

    #[test]
    fn design_round_trip(r in 1.0f64..5000.0, fov in 1.0f64..89.0, h in 64u32..4096, n in 1i64..500) {
        let alpha = fov.to_radians();
        let d = design_baseline(r, alpha, h, n).unwrap();
        let back = range_from_disparity(d, h, alpha, Disparity(n)).unwrap().range_m;
        prop_assert!(rel_diff(back, r) < 1e-9);
    }

    #[test]
    fn continuous_disparity_matches_projection(d in 0.05f64..5.0, fov in 1.0f64..89.0, z in 0.5f64..5000.0) {
        let cam = camera(1920, fov);
        let rig = StereoRig::aligned(cam, d).unwrap();
        let projected = project_pair(&rig, &WorldPoint::on_axis(z)).unwrap().disparity();
        let formula = disparity_for_range(d, 1920, cam.fov_rad(), z).unwrap();
        prop_assert!(rel_diff(projected, formula) < 1e-9);
        let back = range_from_disparity(d, 1920, cam.fov_rad(), Disparity(1)).unwrap().range_m / formula;
        prop_assert!(rel_diff(back, z) < 1e-12);
    }

    #[test]
    fn zero_yaw_gives_zero_error(d in 0.05f64..5.0, r in 1.0f64..5000.0) {
        let rig = StereoRig::aligned(camera(1920, 13.0), d).unwrap();
        prop_assert_eq!(misalignment_range_error(&rig, r).unwrap().rel_error, Some(0.0));
    }

    #[test]
    fn size_error_monotone(w in 0.1f64..5.0, r in 5.0f64..1500.0, dr in 0.0f64..200.0, dw in 0.0f64..3.0) {
        let cam = camera(1920, 13.0);
        let e = |w: f64, r: f64| size_dependent_error(&cam, 1.14, w, r, DEFAULT_KAPPA).unwrap().unwrap_or(f64::INFINITY);
        prop_assert!(e(w, r) <= e(w, r + dr));
        prop_assert!(e(w + dw, r) <= e(w, r));
    }

    #[test]
    fn warnings_only_for_approaching_targets(ranges in proptest::collection::vec(0.5f64..200.0, 2..12)) {
        let estimates: Vec<FrameEstimate> = ranges
            .iter()
            .enumerate()
            .map(|(i, &r)| FrameEstimate { t_s: i as f64 * 0.1, target_index: 0, disparity_px: 1, range_m: r, true_range_m: r })
            .collect();
        let a = closing_warnings(&estimates, 2.0).unwrap();
        prop_assert_eq!(&a, &closing_warnings(&estimates, 2.0).unwrap());
        for ev in &a {
            prop_assert!(ev.closing_speed_mps > 0.0);
            prop_assert!(ev.ttc_s < 2.0);
            let i = (ev.t_s / 0.1).round() as usize;
            prop_assert!(ranges[i] < ranges[i - 1]);
        }
    }

    #[test]
    fn fig3_csv_round_trips(widths in proptest::collection::vec(0.1f64..4.0, 1..4), lo in 5.0f64..100.0, step in 1.0f64..50.0) {
        let cam = camera(1920, 13.0);
        let samples = fig3_curve(&cam, 1.14, &widths, (lo, lo + 40.0 * step), step, DEFAULT_KAPPA).unwrap();
        let mut buf = Vec::new();
        write_curve(CurveKind::Fig3, &samples, &mut buf).unwrap();
        let rows = read_curve(CurveKind::Fig3, buf.as_slice()).unwrap();
        prop_assert_eq!(rows, samples.iter().map(CurveRow::from).collect::<Vec<_>>());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rendered_targets_match_within_one_pixel(r in 20.0f64..1500.0, w in 0.3f64..3.0, seed in any::<u64>()) {
        let cam = CameraModel::from_degrees(1920, 96, 13.0).unwrap();
        let rig = StereoRig::aligned(cam, 1.14).unwrap();
        let target = TargetSpec { range_m: r, lateral_m: 0.0, width_m: w, height_m: 1.5, texture_seed: seed };
        let scene = Scene::new(rig, 64, vec![target]).unwrap();
        let d = disparity_for_range(1.14, 1920, cam.fov_rad(), r).unwrap();
        let pair = render_pair(&scene);
        let region = pair.left_boxes[0].unwrap();
        prop_assume!((5.0..=480.0).contains(&d) && region.width() >= 8);
        let k = block_match(&pair.left, &pair.right, &region, 480).unwrap();
        prop_assert!((k as f64 - d).abs() <= 1.0, "k={} D={}", k, d);
    }
}

#[test]
fn quantization_error_matches_exact_adjacent_ranges() {
    // r(n) = C/n with C symbolic: (r(n) - r(n+1)) / r(n) in exact rationals
    for n in 1..=10_000i64 {
        let r_n = Ratio::new(1, n);
        let r_next = Ratio::new(1, n + 1);
        let eps = (r_n - r_next) / r_n;
        let exact = *eps.numer() as f64 / *eps.denom() as f64;
        assert_eq!(quantization_error(Disparity(n)).unwrap(), exact, "n = {n}");
    }
}

#[test]
fn fig2_divergence_threshold_is_bracketed() {
    let cam = CameraModel::from_degrees(1920, 1080, 13.0).unwrap();
    let step = 0.005;
    for &d in &[0.60, 1.00, 1.14] {
        let curve = fig2_curve(&cam, &[d], 500.0, (0.0, -1.0), step).unwrap();
        let first_div = curve.iter().find(|s| s.value == SampleValue::Divergent).unwrap();
        // exact perturbed disparity at that grid point is non-positive, the previous one positive
        let disparity_at = |deg: f64| {
            let rig = StereoRig::new(cam, d, deg.to_radians()).unwrap();
            project_pair(&rig, &WorldPoint::on_axis(500.0)).map(|p| p.disparity()).unwrap_or(f64::NEG_INFINITY)
        };
        assert!(disparity_at(first_div.abscissa) <= 0.0);
        assert!(disparity_at(first_div.abscissa + step) > 0.0);
        // small-angle predictor: f·tan|δ| ≥ f·d/r
        let f = cam.focal_pixels();
        let predicted = (d / 500.0).atan().to_degrees();
        assert!((first_div.abscissa.abs() - predicted).abs() <= step, "d={d}: {} vs {predicted}", first_div.abscissa);
        assert!(f * first_div.abscissa.abs().to_radians().tan() >= f * d / 500.0 - 1e-9);
    }
}

#[test]
fn fig2_parallel_sweep_matches_sequential() {
    let cam = CameraModel::from_degrees(1920, 1080, 13.0).unwrap();
    let curve = fig2_curve(&cam, &[0.6, 1.0, 1.14], 500.0, (0.0, -1.0), 0.01).unwrap();
    let mut i = 0;
    for &d in &[0.6, 1.0, 1.14] {
        for step in 0..=100 {
            let deg = -(step as f64) * 0.01;
            let rig = StereoRig::new(cam, d, deg.to_radians()).unwrap();
            let res = misalignment_range_error(&rig, 500.0).unwrap();
            assert_eq!(curve[i].abscissa, deg);
            assert_eq!(curve[i].value.value(), res.rel_error);
            i += 1;
        }
    }
}

#[test]
fn toe_in_and_toe_out_signs() {
    let cam = CameraModel::from_degrees(1920, 1080, 13.0).unwrap();
    let out = misalignment_range_error(&StereoRig::new(cam, 1.14, (-0.05f64).to_radians()).unwrap(), 500.0).unwrap();
    let inward = misalignment_range_error(&StereoRig::new(cam, 1.14, 0.05f64.to_radians()).unwrap(), 500.0).unwrap();
    assert!(out.rel_error.unwrap() > 0.0);
    assert!(inward.rel_error.unwrap() < 0.0);
}
