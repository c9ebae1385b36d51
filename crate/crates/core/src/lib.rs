//! Unit vector field (UVF) contour extraction.
//!
//! Landmark polylines are turned into dense unit vector fields plus start
//! and end Gaussian heatmaps ([`targets`]). Contours are recovered from such
//! fields by walking with fixed sub-pixel steps ([`walker`]) and scored
//! against landmarks with closest-point RMS and cumulative quantile reports
//! ([`eval`]). [`synth`] provides seeded scenes and closed-form oracle
//! fields, and [`bench`] runs them end to end. [`io`] holds the grid
//! container, landmark JSON and PNG overlays.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod synth;
pub mod targets;
pub mod walker;

pub use error::{Error, Result};
pub use eval::{
    compare_methods, compare_reports, extract_baseline_landmarks, quantile_report,
    rms_closest_point, ContourError, Method, MethodComparison, QuantileReport, RmsDirection,
    DEFAULT_PROPORTIONS,
};
pub use geometry::{
    nearest_point_on_polyline, nearest_vertex, resample_uniform, square_resize_map, AffineMap2,
    ClosestPoint, Point2, Polyline,
};
pub use grid::ScalarGrid;
pub use io::{GridStack, LandmarkDocument};
pub use synth::{
    analytic_circle_field, analytic_line_field, gen_open_contour, make_scene, make_scene_with,
    perturb_field, perturb_targets, NoiseSpec, Orientation, SceneKind, SceneParams, SceneTargets,
    SyntheticScene,
};
pub use targets::{
    build_endpoint_heatmaps, build_uvf, build_uvf_with_band, field_l2_loss,
    heatmap_weighted_l2_loss, ContourTargets, FieldMode, Heatmap, HeatmapScale, UnitVectorField,
};
pub use walker::{
    localize_peak, sample_field, walk_closed, walk_open, Termination, WalkConfig, WalkedContour,
};
