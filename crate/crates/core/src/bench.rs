//! End-to-end round trips on synthetic scenes: build targets, optionally
//! perturb them, walk, and score against the source landmarks.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{
    extract_baseline_landmarks, quantiles_of, rms_closest_point, QuantileReport, RmsDirection,
};
use crate::geometry::{resample_uniform, Point2};
use crate::grid::ScalarGrid;
use crate::synth::{NoiseSpec, SceneRng, SceneTargets, SyntheticScene};
use crate::targets::Heatmap;
use crate::walker::{walk_closed, walk_open, Termination, WalkConfig, WalkedContour};

/// Landmark count of the per-landmark heatmap baseline.
pub const BASELINE_LANDMARKS: usize = 21;
pub const BASELINE_SIGMA: f64 = 2.0;

/// RMS charged to a walk that produced no usable polyline.
pub const FAILED_WALK_RMS: f64 = f64::INFINITY;

#[derive(Debug, Clone, PartialEq)]
pub struct RoundTrip {
    pub walk: WalkedContour,
    pub rms: f64,
}

/// Walks the scene's own targets and scores the result against `scene.gt`.
///
/// Open scenes start from the start heatmap; circle scenes are seeded just
/// outside the circle's top point.
pub fn round_trip(
    scene: &SyntheticScene,
    cfg: &WalkConfig,
    direction: RmsDirection,
) -> Result<RoundTrip> {
    let walk = match &scene.targets {
        SceneTargets::Open(t) => {
            walk_open(&t.uvf, t.start_heatmap.grid(), t.end_heatmap.grid(), cfg)?
        }
        SceneTargets::Closed { uvf, circle } => {
            let seed = circle.center - Point2::new(0.0, circle.radius + 5.0);
            walk_closed(uvf, seed, cfg)?
        }
    };
    let rms = walk.to_polyline().map_or(FAILED_WALK_RMS, |p| {
        rms_closest_point(&p, &scene.gt, direction)
    });
    Ok(RoundTrip { walk, rms })
}

/// Per-landmark heatmap baseline: resample the ground truth to 21 points,
/// render one Gaussian per point (centers optionally jittered), extract the
/// peaks and score the joined landmarks.
pub fn baseline_round_trip(
    scene: &SyntheticScene,
    shift_sigma: f64,
    noise_seed: u64,
    direction: RmsDirection,
) -> Result<f64> {
    if scene.gt.is_closed() {
        return Err(Error::invalid("baseline applies to open contours"));
    }
    let (w, h) = (scene.width(), scene.height());
    let landmarks = resample_uniform(&scene.gt, BASELINE_LANDMARKS)?;
    let mut rng = SceneRng::new(noise_seed);
    let heatmaps: Vec<ScalarGrid> = landmarks
        .vertices()
        .iter()
        .map(|&c| {
            let jitter = if shift_sigma > 0.0 {
                Point2::new(rng.standard_normal(), rng.standard_normal()) * shift_sigma
            } else {
                Point2::default()
            };
            Heatmap::gaussian(c + jitter, BASELINE_SIGMA, w, h).map(Heatmap::into_grid)
        })
        .collect::<Result<_>>()?;
    let pred = extract_baseline_landmarks(&heatmaps)?;
    Ok(rms_closest_point(&pred, &scene.gt, direction))
}

/// One noise level of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub label: String,
    pub angular_sigma_deg: f64,
    pub heatmap_shift_sigma: f64,
    pub errors: Vec<f64>,
    pub mean: f64,
    pub report: QuantileReport,
    pub terminations: BTreeMap<String, usize>,
}

/// Scores a set of per-scene errors. Failed walks carry an infinite error,
/// which sorts last in the quantiles and makes the mean infinite.
pub fn summarize(
    label: impl Into<String>,
    noise: Option<&NoiseSpec>,
    errors: Vec<f64>,
    terminations: &[Termination],
    proportions: &[f64],
) -> Result<SweepRow> {
    let mean = errors.iter().sum::<f64>() / errors.len() as f64;
    let report = quantiles_of(&errors, proportions)?;
    let mut counts = BTreeMap::new();
    for t in terminations {
        *counts.entry(t.as_str().to_string()).or_insert(0) += 1;
    }
    Ok(SweepRow {
        label: label.into(),
        angular_sigma_deg: noise.map_or(0.0, |n| n.angular_sigma_deg),
        heatmap_shift_sigma: noise.map_or(0.0, |n| n.heatmap_shift_sigma),
        errors,
        mean,
        report,
        terminations: counts,
    })
}

/// Noise stream for scene `seed` at noise level `level`.
pub fn noise_seed(scene_seed: u64, level: usize) -> u64 {
    scene_seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(level as u64 + 1)
}
