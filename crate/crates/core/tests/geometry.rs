mod common;

use common::{dense_distance, open_polyline, point};
use proptest::prelude::*;
use uvf_core::{nearest_point_on_polyline, nearest_vertex, resample_uniform, AffineMap2, Point2};

proptest! {
    #[test]
    fn nearest_vertex_matches_scan(poly in open_polyline(0.0, 100.0, 12), p in point(-20.0, 120.0)) {
        let (i, d) = nearest_vertex(&poly, p);
        let sq: Vec<f64> = poly
            .vertices()
            .iter()
            .map(|v| (v.x - p.x).powi(2) + (v.y - p.y).powi(2))
            .collect();
        let min = sq.iter().cloned().fold(f64::INFINITY, f64::min);
        let first = sq.iter().position(|&x| x == min).unwrap();
        prop_assert_eq!(i, first);
        prop_assert!((d - min.sqrt()).abs() <= 1e-12 * (1.0 + d));
    }

    #[test]
    fn nearest_point_matches_dense_sampling(poly in open_polyline(0.0, 60.0, 6), p in point(-10.0, 70.0)) {
        let h = 2e-3;
        let c = nearest_point_on_polyline(&poly, p);
        let dense = dense_distance(&poly, p, h);
        prop_assert!(c.distance <= dense + 1e-12);
        prop_assert!(dense - c.distance <= h / 2.0 + 1e-12);
        prop_assert!((c.foot.distance(p) - c.distance).abs() < 1e-9);
    }

    #[test]
    fn nearest_point_never_farther_than_nearest_vertex(poly in open_polyline(0.0, 100.0, 10), p in point(-20.0, 120.0)) {
        let c = nearest_point_on_polyline(&poly, p);
        let (_, dv) = nearest_vertex(&poly, p);
        prop_assert!(c.distance <= dv + 1e-12);
    }

    #[test]
    fn resampled_points_lie_on_polyline(poly in open_polyline(0.0, 100.0, 10), k in 2usize..40) {
        let r = resample_uniform(&poly, k).unwrap();
        prop_assert_eq!(r.len(), k);
        prop_assert_eq!(r.first(), poly.first());
        prop_assert_eq!(r.last(), poly.last());
        for &q in r.vertices() {
            prop_assert!(nearest_point_on_polyline(&poly, q).distance < 1e-9);
        }
        // Chords never exceed the arc spacing.
        let spacing = poly.length() / (k - 1) as f64;
        for (a, b) in r.segments() {
            prop_assert!(a.distance(b) <= spacing + 1e-9);
        }
    }

    #[test]
    fn affine_inverse_round_trips(
        sx in 0.05f64..20.0, sy in 0.05f64..20.0,
        tx in -500.0f64..500.0, ty in -500.0f64..500.0,
        p in point(-1000.0, 1000.0),
    ) {
        let m = AffineMap2::new(sx, sy, tx, ty).unwrap();
        let back = m.inverse().apply(m.apply(p));
        prop_assert!(back.distance(p) < 1e-9 * (1.0 + p.norm()));
        let id = m.inverse().compose(&m);
        let q = id.apply(p);
        prop_assert!(q.distance(p) < 1e-9 * (1.0 + p.norm()));
    }
}

#[test]
fn resample_spacing_is_uniform_along_a_straight_line() {
    let poly = uvf_core::Polyline::open(vec![
        Point2::new(0.0, 0.0),
        Point2::new(3.0, 0.0),
        Point2::new(10.0, 0.0),
    ])
    .unwrap();
    let r = resample_uniform(&poly, 11).unwrap();
    for (i, v) in r.vertices().iter().enumerate() {
        assert!((v.x - i as f64).abs() < 1e-12 && v.y == 0.0);
    }
}
