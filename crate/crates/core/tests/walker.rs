use proptest::prelude::*;
use uvf_core::synth::{analytic_circle_field, Orientation};
use uvf_core::{
    build_uvf, localize_peak, make_scene, walk_closed, walk_open, FieldMode, Heatmap, Point2,
    Polyline, SceneKind, SceneTargets, Termination, WalkConfig,
};

#[test]
fn peak_refinement_recovers_subpixel_center() {
    let hm = Heatmap::gaussian(Point2::new(10.3, 20.0), 5.0, 40, 40).unwrap();
    let p = localize_peak(hm.grid()).unwrap();
    assert!((p.x - 10.3).abs() < 0.05, "{p:?}");
    assert!((p.y - 20.0).abs() < 0.05, "{p:?}");
}

#[test]
fn straight_line_walk_stays_on_line() {
    let (a, b) = (Point2::new(20.0, 100.0), Point2::new(200.0, 100.0));
    let poly = Polyline::open(vec![a, b]).unwrap();
    let field = build_uvf(&poly, 224, 224, FieldMode::Vertex).unwrap();
    let start = Heatmap::gaussian(a, 5.0, 224, 224).unwrap();
    let end = Heatmap::gaussian(b, 5.0, 224, 224).unwrap();
    let walk = walk_open(&field, start.grid(), end.grid(), &WalkConfig::default()).unwrap();
    assert_eq!(walk.termination, Termination::ReachedEnd);
    assert!(walk.points.last().unwrap().distance(b) <= 5.0);
    assert!(walk.points.iter().all(|p| (p.y - 100.0).abs() <= 0.5));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn open_walk_steps_are_exact(seed in 0u64..10_000, step in prop_oneof![Just(0.25), Just(0.5), Just(1.0), 0.2f64..1.5]) {
        let scene = make_scene(seed, 160, 160, SceneKind::Open).unwrap();
        let SceneTargets::Open(t) = &scene.targets else { unreachable!() };
        let cfg = WalkConfig { step, ..WalkConfig::default() };
        let walk = walk_open(&t.uvf, t.start_heatmap.grid(), t.end_heatmap.grid(), &cfg).unwrap();
        prop_assert_eq!(walk.points.len(), walk.steps + 1);
        for w in walk.points.windows(2) {
            prop_assert!((w[0].distance(w[1]) - step).abs() <= 1e-9);
        }
        prop_assert!((walk.arc_length() - walk.steps as f64 * step).abs() <= 1e-9 * walk.steps.max(1) as f64);
        let again = walk_open(&t.uvf, t.start_heatmap.grid(), t.end_heatmap.grid(), &cfg).unwrap();
        prop_assert_eq!(walk, again);
    }

    #[test]
    fn circle_loop_is_seed_invariant(angle in 0.0f64..std::f64::consts::TAU, offset in -12.0f64..12.0) {
        let (c, r) = (Point2::new(100.0, 100.0), 50.0);
        let field = analytic_circle_field(c, r, 200, 200, Orientation::Cw).unwrap();
        let seed = c + Point2::new(angle.cos(), angle.sin()) * (r + offset);
        let walk = walk_closed(&field, seed, &WalkConfig::default()).unwrap();
        prop_assert_eq!(walk.termination, Termination::LoopClosed);
        let circumference = std::f64::consts::TAU * r;
        let loop_len = walk.to_polyline().unwrap().length();
        prop_assert!((loop_len - circumference).abs() / circumference < 0.02, "{loop_len}");
        prop_assert!(walk.points.iter().all(|p| (p.distance(c) - r).abs() < 1.5));
    }
}

#[test]
fn walk_off_the_grid_reports_left_grid() {
    let poly = Polyline::open(vec![Point2::new(5.0, 10.0), Point2::new(40.0, 10.0)]).unwrap();
    let field = build_uvf(&poly, 30, 20, FieldMode::Segment).unwrap();
    let start = Heatmap::gaussian(Point2::new(5.0, 10.0), 2.0, 30, 20).unwrap();
    // The end lies outside the grid, so the walk can never reach it.
    let end = Heatmap::gaussian(Point2::new(60.0, 10.0), 2.0, 30, 20).unwrap();
    let walk = walk_open(&field, start.grid(), end.grid(), &WalkConfig::default()).unwrap();
    assert_eq!(walk.termination, Termination::LeftGrid);
}
