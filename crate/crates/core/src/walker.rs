//! Contour extraction by walking along a unit vector field.
//!
//! Open contours start at the refined peak of the start heatmap and advance
//! by explicit Euler steps of fixed length until the end heatmap fires.
//! Closed contours walk from a seed until the trajectory revisits itself.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Polyline};
use crate::grid::ScalarGrid;
use crate::targets::UnitVectorField;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkConfig {
    pub step: f64,
    /// End-heatmap activation at which an open walk stops.
    pub stop_threshold: f64,
    /// `None` means `4 * (width + height)` of the walked field.
    pub max_steps: Option<usize>,
    pub min_norm: f64,
    pub loop_radius: f64,
    pub loop_min_steps: usize,
}

impl Default for WalkConfig {
    fn default() -> Self {
        Self {
            step: 1.0,
            stop_threshold: 0.5,
            max_steps: None,
            min_norm: 1e-3,
            loop_radius: 1.0,
            loop_min_steps: 10,
        }
    }
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::invalid(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        if !(self.stop_threshold > 0.0 && self.stop_threshold < 1.0) {
            return Err(Error::invalid(format!(
                "stop threshold must lie in (0, 1), got {}",
                self.stop_threshold
            )));
        }
        if self.max_steps == Some(0) {
            return Err(Error::invalid("max_steps must be at least 1"));
        }
        if !(self.min_norm >= 0.0) {
            return Err(Error::invalid("min_norm must be non-negative"));
        }
        if !(self.loop_radius > 0.0) {
            return Err(Error::invalid("loop radius must be positive"));
        }
        Ok(())
    }

    pub fn step_budget(&self, width: usize, height: usize) -> usize {
        self.max_steps.unwrap_or(4 * (width + height))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ReachedEnd,
    MaxSteps,
    LeftGrid,
    DegenerateField,
    LoopClosed,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::ReachedEnd => "reached_end",
            Termination::MaxSteps => "max_steps",
            Termination::LeftGrid => "left_grid",
            Termination::DegenerateField => "degenerate_field",
            Termination::LoopClosed => "loop_closed",
        }
    }
}

/// Sub-pixel walk result. `points.len() == steps + 1` and consecutive points
/// are exactly one step apart.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkedContour {
    pub points: Vec<Point2>,
    pub termination: Termination,
    pub steps: usize,
}

impl WalkedContour {
    pub fn arc_length(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].distance(w[1])).sum()
    }

    /// The walked points as a polyline: closed for a found loop, open
    /// otherwise. `None` when fewer than two distinct points were walked.
    pub fn to_polyline(&self) -> Option<Polyline> {
        let mut pts: Vec<Point2> = Vec::with_capacity(self.points.len());
        for &p in &self.points {
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        }
        if self.termination == Termination::LoopClosed {
            while pts.len() > 1 && pts.first() == pts.last() {
                pts.pop();
            }
            if pts.len() >= 3 {
                return Polyline::closed(pts).ok();
            }
        }
        Polyline::open(pts).ok()
    }
}

/// Bilinear field direction at `p`, renormalized to unit length.
pub fn sample_field(field: &UnitVectorField, p: Point2, min_norm: f64) -> Result<Point2> {
    field.sample(p, min_norm)
}

/// Sub-pixel peak of a heatmap grid.
///
/// Integer argmax (first in row-major order on ties), refined per axis by a
/// parabola through the 3 samples around it. The offset is clamped to
/// +/-0.5 px and skipped on an axis where the peak touches the border.
pub fn localize_peak(grid: &ScalarGrid) -> Result<Point2> {
    let values = grid.values();
    let mut best: Option<(usize, f64)> = None;
    let mut lowest = f64::INFINITY;
    for (i, &v) in values.iter().enumerate() {
        if v.is_nan() {
            continue;
        }
        lowest = lowest.min(v);
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    let (idx, peak) = best.ok_or(Error::NoPeak { ordinal: None })?;
    if !(peak > lowest) {
        return Err(Error::NoPeak { ordinal: None });
    }

    let (w, h) = grid.dims();
    let row = idx / w;
    let col = idx % w;
    let dx = if col > 0 && col + 1 < w {
        parabola_offset(grid.get(row, col - 1), peak, grid.get(row, col + 1))
    } else {
        0.0
    };
    let dy = if row > 0 && row + 1 < h {
        parabola_offset(grid.get(row - 1, col), peak, grid.get(row + 1, col))
    } else {
        0.0
    };
    Ok(Point2::new(col as f64 + dx, row as f64 + dy))
}

fn parabola_offset(left: f64, center: f64, right: f64) -> f64 {
    let curvature = left - 2.0 * center + right;
    if !(curvature < 0.0) {
        return 0.0;
    }
    let offset = 0.5 * (left - right) / curvature;
    if offset.is_finite() {
        offset.clamp(-0.5, 0.5)
    } else {
        0.0
    }
}

/// Walks an open contour from the start heatmap peak until the end heatmap
/// activation reaches `cfg.stop_threshold`.
///
/// Always returns a contour; failures are reported through
/// [`WalkedContour::termination`]. Only configuration and shape errors are
/// returned as `Err`.
pub fn walk_open(
    field: &UnitVectorField,
    start: &ScalarGrid,
    end: &ScalarGrid,
    cfg: &WalkConfig,
) -> Result<WalkedContour> {
    cfg.validate()?;
    if start.dims() != field.dims() || end.dims() != field.dims() {
        return Err(Error::invalid(format!(
            "grid dimensions differ: field {:?}, start {:?}, end {:?}",
            field.dims(),
            start.dims(),
            end.dims()
        )));
    }
    let p0 = localize_peak(start)?;
    let budget = cfg.step_budget(field.width(), field.height());

    let mut points = vec![p0];
    let mut p = p0;
    let termination = loop {
        if points.len() > budget {
            break Termination::MaxSteps;
        }
        let dir = match field.sample(p, cfg.min_norm) {
            Ok(d) => d,
            Err(e) => break termination_for(&e),
        };
        p = p + dir * cfg.step;
        points.push(p);
        if end
            .sample_bilinear(p)
            .is_some_and(|v| v >= cfg.stop_threshold)
        {
            break Termination::ReachedEnd;
        }
    };
    Ok(WalkedContour {
        steps: points.len() - 1,
        points,
        termination,
    })
}

/// Walks from `seed` until the path comes back within `cfg.loop_radius` of
/// a point it recorded after the warm-up, and returns that loop.
///
/// The first `loop_min_steps` points (the approach onto the contour) are
/// never used as loop anchors, and a candidate anchor must be at least
/// `loop_min_steps` steps behind the current point.
pub fn walk_closed(
    field: &UnitVectorField,
    seed: Point2,
    cfg: &WalkConfig,
) -> Result<WalkedContour> {
    cfg.validate()?;
    if !crate::grid::in_bounds(seed, field.width(), field.height()) {
        return Err(Error::OutOfBounds {
            x: seed.x,
            y: seed.y,
            width: field.width(),
            height: field.height(),
        });
    }
    let budget = cfg.step_budget(field.width(), field.height());
    let gap = cfg.loop_min_steps.max(1);
    let radius_sq = cfg.loop_radius * cfg.loop_radius;

    let mut points = vec![seed];
    let mut p = seed;
    loop {
        if points.len() > budget {
            return Ok(finish(points, Termination::MaxSteps));
        }
        let dir = match field.sample(p, cfg.min_norm) {
            Ok(d) => d,
            Err(e) => return Ok(finish(points, termination_for(&e))),
        };
        p = p + dir * cfg.step;
        points.push(p);
        let k = points.len() - 1;
        if k < cfg.loop_min_steps + gap {
            continue;
        }
        let anchor = (cfg.loop_min_steps..=k - gap).find(|&j| points[j].distance_sq(p) < radius_sq);
        if let Some(j) = anchor {
            let looped: Vec<Point2> = points.split_off(j);
            return Ok(finish(looped, Termination::LoopClosed));
        }
    }
}

fn finish(points: Vec<Point2>, termination: Termination) -> WalkedContour {
    WalkedContour {
        steps: points.len() - 1,
        points,
        termination,
    }
}

fn termination_for(e: &Error) -> Termination {
    match e {
        Error::OutOfBounds { .. } => Termination::LeftGrid,
        _ => Termination::DegenerateField,
    }
}
