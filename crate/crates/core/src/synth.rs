//! Seeded synthetic scenes and closed-form oracle fields.
//!
//! # Random streams
//!
//! Every random quantity comes from a `ChaCha8` stream (`rand_chacha`)
//! seeded with `seed_from_u64(seed)`. Uniform reals in `[0, 1)` are
//! `(next_u64 >> 11) * 2^-53`; standard normals use the cosine branch of
//! Box-Muller, `sqrt(-2 ln(1 - u1)) * cos(2 pi u2)`, consuming two uniforms
//! per draw. Draw order is documented on each generator so the streams can be
//! reproduced outside Rust.
//!
//! # Orientation
//!
//! Image coordinates are y-down. [`Orientation::Ccw`] uses the tangent
//! `(-(y - cy), x - cx) / r`, i.e. counter-clockwise in the textbook formula;
//! on screen (y down) it appears clockwise. At the rightmost point of a
//! circle it points to `+y`.

use std::f64::consts::{PI, TAU};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{closest_on_segment, Point2, Polyline};
use crate::targets::{
    build_endpoint_heatmaps, build_uvf_with_band, ContourTargets, FieldMode, Heatmap, HeatmapScale,
    UnitVectorField, DEFAULT_K_LENGTH, ON_CONTOUR_HALF_WIDTH,
};

const MAX_ATTEMPTS: usize = 1000;

/// Portable seeded stream; see the module docs for the exact algorithm.
pub struct SceneRng(ChaCha8Rng);

impl SceneRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.0.random::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `lo..=hi`, as `lo + floor(u * (hi - lo + 1))`.
    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        let span = (hi - lo + 1) as f64;
        lo + ((self.uniform() * span) as usize).min(hi - lo)
    }

    pub fn standard_normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (TAU * u2).cos()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }
}

/// Axis-aligned box leaving a 10% margin on every side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginBox {
    pub min: Point2,
    pub max: Point2,
}

impl MarginBox {
    pub fn for_grid(width: usize, height: usize) -> Self {
        Self {
            min: Point2::new(0.1 * width as f64, 0.1 * height as f64),
            max: Point2::new(0.9 * width as f64, 0.9 * height as f64),
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn short_side(&self) -> f64 {
        (self.max.x - self.min.x).min(self.max.y - self.min.y)
    }
}

/// Random open polyline with bounded turning, inside the margin box.
///
/// Draw order per attempt: total length factor `u in [0.3, 0.7)` of the box
/// short side, start x, start y, initial heading, then per segment a length
/// factor in `[0.7, 1.3)` and (after the first segment) a turn in
/// `[-max_turn, max_turn)`. Attempts that leave the box are discarded.
pub fn gen_open_contour(
    seed: u64,
    width: usize,
    height: usize,
    n_vertices: usize,
    max_turn_deg: f64,
) -> Result<Polyline> {
    if !(2..=21).contains(&n_vertices) {
        return Err(Error::invalid(format!(
            "vertex count must lie in [2, 21], got {n_vertices}"
        )));
    }
    if !(max_turn_deg > 0.0 && max_turn_deg <= 90.0) {
        return Err(Error::invalid(format!(
            "max turn must lie in (0, 90] degrees, got {max_turn_deg}"
        )));
    }
    if width < 10 || height < 10 {
        return Err(Error::invalid("grid too small for synthetic contours"));
    }
    let bounds = MarginBox::for_grid(width, height);
    let max_turn = max_turn_deg.to_radians();
    let mut rng = SceneRng::new(seed);

    for _ in 0..MAX_ATTEMPTS {
        let total = bounds.short_side() * rng.uniform_in(0.3, 0.7);
        let mean_len = total / (n_vertices - 1) as f64;
        let start = Point2::new(
            rng.uniform_in(bounds.min.x, bounds.max.x),
            rng.uniform_in(bounds.min.y, bounds.max.y),
        );
        let mut heading = rng.uniform_in(0.0, TAU);
        let mut verts = vec![start];
        let mut ok = true;
        for s in 0..n_vertices - 1 {
            let len = mean_len * rng.uniform_in(0.7, 1.3);
            if s > 0 {
                heading += rng.uniform_in(-max_turn, max_turn);
            }
            let next = *verts.last().unwrap() + Point2::new(heading.cos(), heading.sin()) * len;
            if !bounds.contains(next) {
                ok = false;
                break;
            }
            verts.push(next);
        }
        if ok {
            return Polyline::open(verts);
        }
    }
    Err(Error::GenerationFailed {
        attempts: MAX_ATTEMPTS,
        reason: format!("no {n_vertices}-vertex contour fits the margin box"),
    })
}

/// Closed-form field for a single segment: tangent inside the on-contour
/// band, otherwise the direction to its closest point.
pub fn analytic_line_field(
    a: Point2,
    b: Point2,
    width: usize,
    height: usize,
) -> Result<UnitVectorField> {
    let tangent = (b - a)
        .normalized()
        .ok_or_else(|| Error::invalid("segment endpoints coincide"))?;
    check_dims(width, height)?;
    Ok(UnitVectorField::from_cell_fn(width, height, |c| {
        let foot = closest_on_segment(a, b, c);
        if foot.distance(c) < ON_CONTOUR_HALF_WIDTH {
            tangent
        } else {
            (foot - c).normalized().unwrap_or(tangent)
        }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    Cw,
    #[default]
    Ccw,
}

/// Closed-form circle field: radial toward the circle off it, tangential
/// within half a pixel of it, `(1, 0)` at the exact center.
pub fn analytic_circle_field(
    center: Point2,
    r: f64,
    width: usize,
    height: usize,
    orientation: Orientation,
) -> Result<UnitVectorField> {
    if !(r > 1.0 && r.is_finite()) {
        return Err(Error::invalid(format!(
            "circle radius must exceed 1, got {r}"
        )));
    }
    check_dims(width, height)?;
    let sign = match orientation {
        Orientation::Ccw => 1.0,
        Orientation::Cw => -1.0,
    };
    Ok(UnitVectorField::from_cell_fn(width, height, |c| {
        let offset = c - center;
        let d = offset.norm();
        if d == 0.0 {
            return Point2::new(1.0, 0.0);
        }
        let radial = Point2::new(offset.x / d, offset.y / d);
        if (d - r).abs() < ON_CONTOUR_HALF_WIDTH {
            Point2::new(-radial.y, radial.x) * sign
        } else if d > r {
            radial * -1.0
        } else {
            radial
        }
    }))
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width < 2 || height < 2 {
        return Err(Error::invalid(format!(
            "field must be at least 2x2, got {width}x{height}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub angular_sigma_deg: f64,
    pub heatmap_shift_sigma: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn angular(angular_sigma_deg: f64, seed: u64) -> Self {
        Self {
            angular_sigma_deg,
            heatmap_shift_sigma: 0.0,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.angular_sigma_deg >= 0.0 && self.heatmap_shift_sigma >= 0.0) {
            return Err(Error::invalid("noise sigmas must be non-negative"));
        }
        Ok(())
    }
}

/// Rotates each cell by an independent normal angle (row-major draw order).
pub fn perturb_field(field: &UnitVectorField, spec: &NoiseSpec) -> Result<UnitVectorField> {
    spec.validate()?;
    if spec.angular_sigma_deg == 0.0 {
        return Ok(field.clone());
    }
    let mut rng = SceneRng::new(spec.seed);
    let sigma = spec.angular_sigma_deg.to_radians();
    let w = field.width();
    Ok(UnitVectorField::from_cell_fn(w, field.height(), |c| {
        let v = field.get(c.y as usize, c.x as usize);
        let (s, co) = (rng.standard_normal() * sigma).sin_cos();
        Point2::new(v.x * co - v.y * s, v.x * s + v.y * co)
    }))
}

/// Applies field rotation noise and, if requested, shifts both heatmap
/// centers by independent normal offsets (drawn after the field noise from a
/// stream seeded with `spec.seed ^ 0x9E37_79B9_7F4A_7C15`).
pub fn perturb_targets(targets: &ContourTargets, spec: &NoiseSpec) -> Result<ContourTargets> {
    let uvf = perturb_field(&targets.uvf, spec)?;
    let (w, h) = uvf.dims();
    let (start_heatmap, end_heatmap) = if spec.heatmap_shift_sigma > 0.0 {
        let mut rng = SceneRng::new(spec.seed ^ 0x9E37_79B9_7F4A_7C15);
        let mut shift = |hm: &Heatmap| {
            let dx = rng.standard_normal() * spec.heatmap_shift_sigma;
            let dy = rng.standard_normal() * spec.heatmap_shift_sigma;
            Heatmap::gaussian(hm.center() + Point2::new(dx, dy), hm.sigma(), w, h)
        };
        (shift(&targets.start_heatmap)?, shift(&targets.end_heatmap)?)
    } else {
        (targets.start_heatmap.clone(), targets.end_heatmap.clone())
    };
    Ok(ContourTargets {
        uvf,
        start_heatmap,
        end_heatmap,
        source: targets.source.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SceneKind {
    Open,
    Circle,
}

/// Knobs for [`make_scene_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneParams {
    /// Fixed vertex count, or `None` to draw uniformly from `[2, 21]`.
    pub n_vertices: Option<usize>,
    pub max_turn_deg: f64,
    pub mode: FieldMode,
    /// Endpoint heatmap width. Realized through length scaling with
    /// `k = sigma / length`; `None` uses the default length constant.
    pub heatmap_sigma: Option<f64>,
    /// Half-width of the on-contour tangent band of the target field.
    pub band_half_width: f64,
}

/// Endpoint heatmap width used by synthetic scenes.
pub const SCENE_HEATMAP_SIGMA: f64 = 1.0;

impl Default for SceneParams {
    fn default() -> Self {
        Self {
            n_vertices: None,
            max_turn_deg: 30.0,
            mode: FieldMode::Vertex,
            heatmap_sigma: Some(SCENE_HEATMAP_SIGMA),
            band_half_width: ON_CONTOUR_HALF_WIDTH,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircleSpec {
    pub center: Point2,
    pub radius: f64,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SceneTargets {
    Open(ContourTargets),
    Closed {
        uvf: UnitVectorField,
        circle: CircleSpec,
    },
}

impl SceneTargets {
    pub fn uvf(&self) -> &UnitVectorField {
        match self {
            SceneTargets::Open(t) => &t.uvf,
            SceneTargets::Closed { uvf, .. } => uvf,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticScene {
    pub gt: Polyline,
    pub targets: SceneTargets,
    pub seed: u64,
    pub noise: Option<NoiseSpec>,
}

impl SyntheticScene {
    pub fn width(&self) -> usize {
        self.targets.uvf().width()
    }

    pub fn height(&self) -> usize {
        self.targets.uvf().height()
    }

    /// Same scene with `spec` applied to its targets.
    pub fn with_noise(&self, spec: NoiseSpec) -> Result<SyntheticScene> {
        let targets = match &self.targets {
            SceneTargets::Open(t) => SceneTargets::Open(perturb_targets(t, &spec)?),
            SceneTargets::Closed { uvf, circle } => SceneTargets::Closed {
                uvf: perturb_field(uvf, &spec)?,
                circle: circle.clone(),
            },
        };
        Ok(SyntheticScene {
            gt: self.gt.clone(),
            targets,
            seed: self.seed,
            noise: Some(spec),
        })
    }
}

pub fn make_scene(
    seed: u64,
    width: usize,
    height: usize,
    kind: SceneKind,
) -> Result<SyntheticScene> {
    make_scene_with(seed, width, height, kind, &SceneParams::default())
}

/// Vertices used for the ground-truth polygon of a circle scene.
pub const CIRCLE_GT_VERTICES: usize = 64;

/// Reproducible scene for `seed`.
///
/// Open scenes draw the vertex count (when not fixed) and a contour seed
/// from the scene stream, then build vertex- or segment-mode targets.
/// Circle scenes draw radius in `[0.15, 0.4)` of the box short side, a
/// center keeping the circle inside the box, and an orientation.
pub fn make_scene_with(
    seed: u64,
    width: usize,
    height: usize,
    kind: SceneKind,
    params: &SceneParams,
) -> Result<SyntheticScene> {
    check_dims(width, height)?;
    let mut rng = SceneRng::new(seed);
    match kind {
        SceneKind::Open => {
            let n = match params.n_vertices {
                Some(n) => n,
                None => rng.int_in(2, 21),
            };
            let contour_seed = rng.next_u64();
            let gt = gen_open_contour(contour_seed, width, height, n, params.max_turn_deg)?;
            let length = gt.length();
            let k = match params.heatmap_sigma {
                Some(sigma) => sigma / length,
                None => DEFAULT_K_LENGTH,
            };
            let uvf = build_uvf_with_band(&gt, width, height, params.mode, params.band_half_width)?;
            let (start_heatmap, end_heatmap) =
                build_endpoint_heatmaps(&gt, width, height, HeatmapScale::Length(length), k)?;
            Ok(SyntheticScene {
                targets: SceneTargets::Open(ContourTargets {
                    uvf,
                    start_heatmap,
                    end_heatmap,
                    source: gt.clone(),
                }),
                gt,
                seed,
                noise: None,
            })
        }
        SceneKind::Circle => {
            let bounds = MarginBox::for_grid(width, height);
            let radius = bounds.short_side() * rng.uniform_in(0.15, 0.4);
            let center = Point2::new(
                rng.uniform_in(bounds.min.x + radius, bounds.max.x - radius),
                rng.uniform_in(bounds.min.y + radius, bounds.max.y - radius),
            );
            let orientation = if rng.uniform() < 0.5 {
                Orientation::Ccw
            } else {
                Orientation::Cw
            };
            let uvf = analytic_circle_field(center, radius, width, height, orientation)?;
            let gt = circle_polygon(center, radius, CIRCLE_GT_VERTICES, orientation)?;
            Ok(SyntheticScene {
                gt,
                targets: SceneTargets::Closed {
                    uvf,
                    circle: CircleSpec {
                        center,
                        radius,
                        orientation,
                    },
                },
                seed,
                noise: None,
            })
        }
    }
}

/// Regular polygon inscribed in a circle, traversed in the field's direction.
pub fn circle_polygon(
    center: Point2,
    r: f64,
    n: usize,
    orientation: Orientation,
) -> Result<Polyline> {
    let sign = match orientation {
        Orientation::Ccw => 1.0,
        Orientation::Cw => -1.0,
    };
    let verts = (0..n)
        .map(|i| {
            let t = sign * 2.0 * PI * i as f64 / n as f64;
            center + Point2::new(t.cos(), t.sin()) * r
        })
        .collect();
    Polyline::closed(verts)
}
