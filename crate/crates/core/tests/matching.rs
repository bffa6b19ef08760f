use stereo_range::{
    block_match, disparity_for_range, project_pair, render_pair, BoundingBox, CameraModel, Image, Scene, StereoRig,
    TargetSpec, WorldPoint,
};

fn paper_rig(v_resolution: u32) -> StereoRig {
    let cam = CameraModel::from_degrees(1920, v_resolution, 13.0).unwrap();
    StereoRig::aligned(cam, 1.14).unwrap()
}

fn on_axis(range_m: f64, width_m: f64, seed: u64) -> TargetSpec {
    TargetSpec { range_m, lateral_m: 0.0, width_m, height_m: 1.5, texture_seed: seed }
}

fn matched(scene: &Scene, target: usize) -> (i64, BoundingBox) {
    let pair = render_pair(scene);
    let region = pair.left_boxes[target].expect("target in view");
    (block_match(&pair.left, &pair.right, &region, 480).unwrap(), region)
}

/// Textured image built from world-anchored target renders, shifted by `k`.
fn shifted_pair(k: usize) -> (Image, Image, BoundingBox) {
    let scene = Scene::new(paper_rig(120), 64, vec![on_axis(30.0, 3.0, 77)]).unwrap();
    let left = render_pair(&scene).left;
    let mut right = Image::filled(left.width(), left.height(), 0);
    for v in 0..left.height() {
        for u in 0..left.width() - k {
            right.set(u, v, left.get(u + k, v));
        }
    }
    let region = render_pair(&scene).left_boxes[0].unwrap();
    (left, right, region)
}

#[test]
fn shift_recovery_on_rendered_texture() {
    for k in [0usize, 1, 5, 19] {
        let (left, right, region) = shifted_pair(k);
        assert_eq!(block_match(&left, &right, &region, 60).unwrap(), k as i64);
    }
}

#[test]
fn rendered_target_at_500m() {
    let scene = Scene::new(paper_rig(240), 64, vec![on_axis(500.0, 2.0, 1)]).unwrap();
    // continuous disparity 18.961 px; the exhaustive search settles on 19
    assert_eq!(matched(&scene, 0).0, 19);
}

#[test]
fn matched_disparity_tracks_truth() {
    let alpha = 13f64.to_radians();
    for r in [20.0, 35.0, 50.0, 75.0, 100.0, 150.0, 200.0, 300.0, 500.0, 1000.0] {
        for (w, seed) in [(0.5, 1u64), (1.0, 2), (2.0, 3)] {
            let d = disparity_for_range(1.14, 1920, alpha, r).unwrap();
            let scene = Scene::new(paper_rig(240), 64, vec![on_axis(r, w, seed)]).unwrap();
            let (k, region) = matched(&scene, 0);
            if d >= 5.0 && region.width() >= 8 {
                assert!((k as f64 - d).abs() <= 1.0, "r={r} w={w}: k={k} D={d}");
            }
        }
    }
}

#[test]
fn lateral_targets_match_too() {
    let rig = paper_rig(240);
    for lateral in [-4.0, -1.5, 2.5] {
        let t = TargetSpec { range_m: 80.0, lateral_m: lateral, width_m: 1.8, height_m: 1.2, texture_seed: 9 };
        let scene = Scene::new(rig, 64, vec![t]).unwrap();
        let (k, _) = matched(&scene, 0);
        let truth = project_pair(&rig, &WorldPoint::new(lateral, 0.0, 80.0)).unwrap().disparity();
        assert!((k as f64 - truth).abs() <= 1.0, "lateral {lateral}: k={k} D={truth}");
    }
}

#[test]
fn yawed_render_matches_perturbed_disparity() {
    let cam = CameraModel::from_degrees(1920, 240, 13.0).unwrap();
    let rig = StereoRig::new(cam, 1.14, (-0.1f64).to_radians()).unwrap();
    let scene = Scene::new(rig, 64, vec![on_axis(60.0, 2.0, 4)]).unwrap();
    let (k, _) = matched(&scene, 0);
    let perturbed = project_pair(&rig, &WorldPoint::on_axis(60.0)).unwrap().disparity();
    assert!((k as f64 - perturbed).abs() <= 1.0, "k={k} D'={perturbed}");
}

#[test]
fn nearer_target_wins_the_match() {
    // a small near target in front of a large far one: the near box matches at the near disparity
    let rig = paper_rig(240);
    let far = on_axis(200.0, 6.0, 5);
    let near = TargetSpec { range_m: 40.0, lateral_m: 0.5, width_m: 1.0, height_m: 1.0, texture_seed: 6 };
    let scene = Scene::new(rig, 64, vec![far, near]).unwrap();
    let (k, _) = matched(&scene, 1);
    let d = project_pair(&rig, &WorldPoint::new(0.5, 0.0, 40.0)).unwrap().disparity();
    assert!((k as f64 - d).abs() <= 1.0);
}

#[test]
fn renders_are_bit_identical() {
    let scene = Scene::new(paper_rig(240), 50, vec![on_axis(90.0, 2.0, 3), on_axis(45.0, 0.7, 8)]).unwrap();
    let a = render_pair(&scene);
    let b = render_pair(&scene);
    assert_eq!(a.left.to_pgm(), b.left.to_pgm());
    assert_eq!(a.right.to_pgm(), b.right.to_pgm());
}
