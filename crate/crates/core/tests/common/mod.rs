#![allow(dead_code)]

use proptest::prelude::*;
use uvf_core::{Point2, Polyline};

/// Open polylines with 2..=max_vertices vertices inside `[lo, hi]^2`.
pub fn open_polyline(lo: f64, hi: f64, max_vertices: usize) -> impl Strategy<Value = Polyline> {
    prop::collection::vec((lo..hi, lo..hi), 2..=max_vertices).prop_filter_map("degenerate", |v| {
        Polyline::open(v.into_iter().map(|(x, y)| Point2::new(x, y)).collect()).ok()
    })
}

/// Like [`open_polyline`] with coordinates on a quarter-pixel lattice, so
/// that offsets from integer cell centers are exact.
pub fn lattice_polyline(lo: i32, hi: i32, max_vertices: usize) -> impl Strategy<Value = Polyline> {
    prop::collection::vec((4 * lo..4 * hi, 4 * lo..4 * hi), 2..=max_vertices).prop_filter_map(
        "degenerate",
        |v| {
            Polyline::open(
                v.into_iter()
                    .map(|(x, y)| Point2::new(x as f64 / 4.0, y as f64 / 4.0))
                    .collect(),
            )
            .ok()
        },
    )
}

pub fn point(lo: f64, hi: f64) -> impl Strategy<Value = Point2> {
    (lo..hi, lo..hi).prop_map(|(x, y)| Point2::new(x, y))
}

/// Distance from `p` to `poly` by sampling every segment at spacing <= `h`.
/// Overestimates the true distance by at most `h / 2`.
pub fn dense_distance(poly: &Polyline, p: Point2, h: f64) -> f64 {
    let mut best = f64::INFINITY;
    for (a, b) in poly.segments() {
        let n = (a.distance(b) / h).ceil().max(1.0) as usize;
        for i in 0..=n {
            let q = a.lerp(b, i as f64 / n as f64);
            best = best.min(q.distance(p));
        }
    }
    best
}
