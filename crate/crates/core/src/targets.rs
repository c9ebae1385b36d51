//! Ground-truth unit vector fields and endpoint heatmaps built from
//! annotated polylines, plus the two training losses as plain metrics.

use crate::error::{Error, Result};
use crate::geometry::{nearest_point_on_polyline, nearest_vertex, Point2, Polyline};
use crate::grid::{BilinearCell, ScalarGrid};

/// Cells whose center is closer than this to the contour carry its tangent.
pub const ON_CONTOUR_HALF_WIDTH: f64 = 1.0;

/// A cell center closer than this to a vertex counts as sitting on it.
pub const VERTEX_COINCIDENCE: f64 = 1e-9;

const UNIT_NORM_TOLERANCE: f64 = 1e-6;

/// Dense `height x width` field of unit vectors, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVectorField {
    width: usize,
    height: usize,
    vx: Vec<f64>,
    vy: Vec<f64>,
}

impl UnitVectorField {
    /// Wraps components that are already unit length (within 1e-6).
    pub fn new(width: usize, height: usize, vx: Vec<f64>, vy: Vec<f64>) -> Result<Self> {
        Self::check_shape(width, height, &vx, &vy)?;
        for (i, (&x, &y)) in vx.iter().zip(&vy).enumerate() {
            let n = x.hypot(y);
            if !n.is_finite() || (n - 1.0).abs() > UNIT_NORM_TOLERANCE {
                return Err(Error::invalid(format!(
                    "cell {i} has norm {n}, expected a unit vector"
                )));
            }
        }
        Ok(Self {
            width,
            height,
            vx,
            vy,
        })
    }

    /// Normalizes arbitrary components, e.g. a raw network prediction.
    /// Zero or non-finite cells are rejected.
    pub fn from_raw(width: usize, height: usize, vx: Vec<f64>, vy: Vec<f64>) -> Result<Self> {
        Self::check_shape(width, height, &vx, &vy)?;
        let mut nx = Vec::with_capacity(vx.len());
        let mut ny = Vec::with_capacity(vy.len());
        for (i, (&x, &y)) in vx.iter().zip(&vy).enumerate() {
            let u = Point2::new(x, y)
                .normalized()
                .ok_or_else(|| Error::invalid(format!("cell {i} has no direction ({x}, {y})")))?;
            nx.push(u.x);
            ny.push(u.y);
        }
        Ok(Self {
            width,
            height,
            vx: nx,
            vy: ny,
        })
    }

    fn check_shape(width: usize, height: usize, vx: &[f64], vy: &[f64]) -> Result<()> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("field dimensions must be positive"));
        }
        if vx.len() != width * height || vy.len() != width * height {
            return Err(Error::invalid(format!(
                "field {width}x{height} needs {} cells per component",
                width * height
            )));
        }
        Ok(())
    }

    /// Builds a field cell by cell from `f(center)`, which must return a
    /// unit vector.
    pub(crate) fn from_cell_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(Point2) -> Point2,
    ) -> Self {
        let mut vx = Vec::with_capacity(width * height);
        let mut vy = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                let v = f(Point2::new(col as f64, row as f64));
                vx.push(v.x);
                vy.push(v.y);
            }
        }
        Self {
            width,
            height,
            vx,
            vy,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn vx(&self) -> &[f64] {
        &self.vx
    }

    pub fn vy(&self) -> &[f64] {
        &self.vy
    }

    pub fn get(&self, row: usize, col: usize) -> Point2 {
        let i = row * self.width + col;
        Point2::new(self.vx[i], self.vy[i])
    }

    /// Largest deviation of any cell norm from 1.
    pub fn max_norm_error(&self) -> f64 {
        self.vx
            .iter()
            .zip(&self.vy)
            .map(|(x, y)| (x.hypot(*y) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Direction at a continuous position: bilinear blend of each component,
    /// renormalized to unit length.
    pub fn sample(&self, p: Point2, min_norm: f64) -> Result<Point2> {
        let cell = BilinearCell::locate(p, self.width, self.height).ok_or(Error::OutOfBounds {
            x: p.x,
            y: p.y,
            width: self.width,
            height: self.height,
        })?;
        if let Some((r, c)) = cell.node() {
            return Ok(self.get(r, c));
        }
        let x = cell.blend(|r, c| self.vx[r * self.width + c]);
        let y = cell.blend(|r, c| self.vy[r * self.width + c]);
        let norm = x.hypot(y);
        if !(norm >= min_norm) || norm == 0.0 {
            return Err(Error::DegenerateField {
                x: p.x,
                y: p.y,
                norm,
            });
        }
        Ok(Point2::new(x / norm, y / norm))
    }

    /// Field mirrored left/right; directions get their x component negated.
    pub fn flipped_horizontally(&self) -> UnitVectorField {
        let w = self.width;
        Self::from_cell_fn(w, self.height, |c| {
            let v = self.get(c.y as usize, w - 1 - c.x as usize);
            Point2::new(-v.x, v.y)
        })
    }
}

/// Which contour element off-contour vectors point at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FieldMode {
    /// Nearest annotated vertex.
    #[default]
    Vertex,
    /// Nearest point on the interpolated polyline.
    Segment,
}

/// Unit vector field for one contour.
///
/// On-contour cells (closer than [`ON_CONTOUR_HALF_WIDTH`]) carry the unit
/// tangent of their segment, oriented toward the next vertex; a cell sitting
/// on a vertex takes the outgoing tangent. All other cells point at the
/// nearest vertex or nearest polyline point, depending on `mode`.
pub fn build_uvf(
    poly: &Polyline,
    width: usize,
    height: usize,
    mode: FieldMode,
) -> Result<UnitVectorField> {
    build_uvf_with_band(poly, width, height, mode, ON_CONTOUR_HALF_WIDTH)
}

/// [`build_uvf`] with an explicit on-contour band half-width.
pub fn build_uvf_with_band(
    poly: &Polyline,
    width: usize,
    height: usize,
    mode: FieldMode,
    band: f64,
) -> Result<UnitVectorField> {
    if !(band > 0.0 && band.is_finite()) {
        return Err(Error::invalid(format!(
            "band half-width must be positive, got {band}"
        )));
    }
    if width < 2 || height < 2 {
        return Err(Error::invalid(format!(
            "field must be at least 2x2, got {width}x{height}"
        )));
    }
    if poly.length() <= 0.0 || !poly.length().is_finite() {
        return Err(Error::invalid("degenerate polyline"));
    }
    Ok(UnitVectorField::from_cell_fn(width, height, |c| {
        uvf_direction(poly, c, mode, band)
    }))
}

/// Target direction for a single position.
pub fn uvf_direction(poly: &Polyline, c: Point2, mode: FieldMode, band: f64) -> Point2 {
    let (vi, vd) = nearest_vertex(poly, c);
    if vd < VERTEX_COINCIDENCE {
        return poly.vertex_tangent(vi);
    }
    let closest = nearest_point_on_polyline(poly, c);
    if closest.distance < band {
        // A foot on the segment's far end is that vertex: take its tangent.
        let (_, end) = poly.segment(closest.segment);
        if closest.foot == end {
            return poly.vertex_tangent((closest.segment + 1) % poly.len());
        }
        return poly.segment_tangent(closest.segment);
    }
    let target = match mode {
        FieldMode::Vertex => poly.vertices()[vi],
        FieldMode::Segment => closest.foot,
    };
    // Distance is at least 0.5 here, so the direction is well defined.
    (target - c).normalized().unwrap_or(Point2::new(1.0, 0.0))
}

/// How the Gaussian width of the endpoint heatmaps is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HeatmapScale {
    /// `sigma^2 = k * area`, with the area of a reference object in px^2.
    Area(f64),
    /// `sigma = k * length`, with the contour length in px.
    Length(f64),
}

pub const DEFAULT_K_AREA: f64 = 0.0025;
pub const DEFAULT_K_LENGTH: f64 = 0.05;

impl HeatmapScale {
    pub fn default_k(&self) -> f64 {
        match self {
            HeatmapScale::Area(_) => DEFAULT_K_AREA,
            HeatmapScale::Length(_) => DEFAULT_K_LENGTH,
        }
    }

    pub fn sigma(&self, k: f64) -> Result<f64> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::invalid(format!(
                "scale constant must be positive, got {k}"
            )));
        }
        let sigma = match *self {
            HeatmapScale::Area(a) if a > 0.0 && a.is_finite() => (k * a).sqrt(),
            HeatmapScale::Length(l) if l > 0.0 && l.is_finite() => k * l,
            other => {
                return Err(Error::invalid(format!(
                    "scale value must be positive: {other:?}"
                )))
            }
        };
        Ok(sigma)
    }
}

/// Unnormalized Gaussian activation with peak 1 at `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    grid: ScalarGrid,
    center: Point2,
    sigma: f64,
}

impl Heatmap {
    pub fn gaussian(center: Point2, sigma: f64, width: usize, height: usize) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::invalid(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        if !center.is_finite() {
            return Err(Error::invalid("heatmap center must be finite"));
        }
        if width == 0 || height == 0 {
            return Err(Error::invalid("heatmap dimensions must be positive"));
        }
        let grid = ScalarGrid::from_fn(width, height, |row, col| {
            gaussian_value(center, sigma, Point2::new(col as f64, row as f64))
        });
        Ok(Self {
            grid,
            center,
            sigma,
        })
    }

    pub fn grid(&self) -> &ScalarGrid {
        &self.grid
    }

    pub fn into_grid(self) -> ScalarGrid {
        self.grid
    }

    pub fn center(&self) -> Point2 {
        self.center
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Exact activation at a continuous position.
    pub fn value_at(&self, p: Point2) -> f64 {
        gaussian_value(self.center, self.sigma, p)
    }
}

/// `exp(-d^2 / (2 sigma^2))`, kept strictly positive where it would underflow.
fn gaussian_value(center: Point2, sigma: f64, p: Point2) -> f64 {
    let v = (-center.distance_sq(p) / (2.0 * sigma * sigma)).exp();
    v.max(f64::MIN_POSITIVE)
}

/// Start and end heatmaps for an open contour.
pub fn build_endpoint_heatmaps(
    poly: &Polyline,
    width: usize,
    height: usize,
    scale: HeatmapScale,
    k: f64,
) -> Result<(Heatmap, Heatmap)> {
    if poly.is_closed() {
        return Err(Error::invalid("closed contours take no endpoint heatmaps"));
    }
    let sigma = scale.sigma(k)?;
    Ok((
        Heatmap::gaussian(poly.first(), sigma, width, height)?,
        Heatmap::gaussian(poly.last(), sigma, width, height)?,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourTargets {
    pub uvf: UnitVectorField,
    pub start_heatmap: Heatmap,
    pub end_heatmap: Heatmap,
    pub source: Polyline,
}

impl ContourTargets {
    pub fn build(
        poly: &Polyline,
        width: usize,
        height: usize,
        mode: FieldMode,
        scale: HeatmapScale,
        k: f64,
    ) -> Result<Self> {
        let uvf = build_uvf(poly, width, height, mode)?;
        let (start_heatmap, end_heatmap) = build_endpoint_heatmaps(poly, width, height, scale, k)?;
        Ok(Self {
            uvf,
            start_heatmap,
            end_heatmap,
            source: poly.clone(),
        })
    }
}

/// Mean over cells of the squared vector difference.
pub fn field_l2_loss(pred: &UnitVectorField, target: &UnitVectorField) -> Result<f64> {
    if pred.dims() != target.dims() {
        return Err(Error::invalid(format!(
            "field dimensions differ: {:?} vs {:?}",
            pred.dims(),
            target.dims()
        )));
    }
    let sum: f64 = pred
        .vx
        .iter()
        .zip(&pred.vy)
        .zip(target.vx.iter().zip(&target.vy))
        .map(|((px, py), (tx, ty))| (px - tx).powi(2) + (py - ty).powi(2))
        .sum();
    Ok(sum / pred.vx.len() as f64)
}

pub const DEFAULT_HEATMAP_WEIGHT: f64 = 10.0;

/// Mean over cells of `(1 + w * target) * (pred - target)^2`.
///
/// Stand-in for the weighted heatmap loss used in training; the `(1 + w t)`
/// factor up-weights the sparse peak region.
pub fn heatmap_weighted_l2_loss(pred: &ScalarGrid, target: &ScalarGrid, w: f64) -> Result<f64> {
    if pred.dims() != target.dims() {
        return Err(Error::invalid(format!(
            "heatmap dimensions differ: {:?} vs {:?}",
            pred.dims(),
            target.dims()
        )));
    }
    if !(w >= 0.0 && w.is_finite()) {
        return Err(Error::invalid(format!(
            "weight must be non-negative, got {w}"
        )));
    }
    let sum: f64 = pred
        .values()
        .iter()
        .zip(target.values())
        .map(|(p, t)| (1.0 + w * t) * (p - t).powi(2))
        .sum();
    Ok(sum / pred.values().len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vertical() -> Polyline {
        Polyline::open(vec![Point2::new(0.0, 0.0), Point2::new(0.0, 10.0)]).unwrap()
    }

    #[test]
    fn off_contour_points_at_nearest_vertex() {
        let f = build_uvf(&vertical(), 12, 12, FieldMode::Vertex).unwrap();
        let v = f.get(5, 5);
        let h = -(0.5f64.sqrt());
        assert!((v.x - h).abs() < 1e-12 && (v.y - h).abs() < 1e-12);
    }

    #[test]
    fn segment_mode_points_perpendicular() {
        let f = build_uvf(&vertical(), 12, 12, FieldMode::Segment).unwrap();
        assert_eq!(f.get(5, 5), Point2::new(-1.0, 0.0));
    }

    #[test]
    fn on_contour_carries_tangent() {
        let f = build_uvf(&vertical(), 12, 12, FieldMode::Vertex).unwrap();
        assert_eq!(f.get(3, 0), Point2::new(0.0, 1.0));
        // Last vertex of an open polyline takes the incoming tangent.
        assert_eq!(f.get(10, 0), Point2::new(0.0, 1.0));
    }

    #[test]
    fn vertex_coincidence_uses_outgoing_segment() {
        let poly = Polyline::open(vec![
            Point2::new(2.0, 2.0),
            Point2::new(6.0, 2.0),
            Point2::new(6.0, 8.0),
        ])
        .unwrap();
        let f = build_uvf(&poly, 10, 10, FieldMode::Vertex).unwrap();
        assert_eq!(f.get(2, 6), Point2::new(0.0, 1.0));
        assert_eq!(f.get(2, 2), Point2::new(1.0, 0.0));
        assert_eq!(f.get(8, 6), Point2::new(0.0, 1.0));
    }

    #[test]
    fn closed_polyline_wraps_tangent() {
        let sq = Polyline::closed(vec![
            Point2::new(2.0, 2.0),
            Point2::new(7.0, 2.0),
            Point2::new(7.0, 7.0),
            Point2::new(2.0, 7.0),
        ])
        .unwrap();
        let f = build_uvf(&sq, 10, 10, FieldMode::Segment).unwrap();
        // Last vertex points back along the closing segment.
        assert_eq!(f.get(7, 2), Point2::new(0.0, -1.0));
        assert_eq!(f.get(4, 2), Point2::new(0.0, -1.0));
    }

    #[test]
    fn rejects_tiny_grid() {
        assert!(build_uvf(&vertical(), 1, 5, FieldMode::Vertex).is_err());
    }

    #[test]
    fn heatmap_values() {
        let poly = Polyline::open(vec![Point2::new(20.0, 30.0), Point2::new(80.0, 110.0)]).unwrap();
        assert_eq!(poly.length(), 100.0);
        let (start, end) =
            build_endpoint_heatmaps(&poly, 128, 128, HeatmapScale::Length(poly.length()), 0.05)
                .unwrap();
        assert_eq!(start.sigma(), 5.0);
        assert_eq!(start.value_at(start.center()), 1.0);
        assert_eq!(start.grid().get(30, 20), 1.0);
        assert!((start.value_at(Point2::new(25.0, 30.0)) - (-0.5f64).exp()).abs() < 1e-12);
        assert!((end.value_at(Point2::new(80.0, 120.0)) - (-2.0f64).exp()).abs() < 1e-12);
        assert_eq!(end.center(), poly.last());
    }

    #[test]
    fn area_scaling() {
        let s = HeatmapScale::Area(1e4).sigma(DEFAULT_K_AREA).unwrap();
        assert!((s - 5.0).abs() < 1e-12);
        assert!(HeatmapScale::Area(-1.0).sigma(0.1).is_err());
        assert!(HeatmapScale::Length(10.0).sigma(0.0).is_err());
    }

    #[test]
    fn closed_contours_have_no_heatmaps() {
        let sq = Polyline::closed(vec![
            Point2::new(2.0, 2.0),
            Point2::new(7.0, 2.0),
            Point2::new(7.0, 7.0),
        ])
        .unwrap();
        assert!(build_endpoint_heatmaps(&sq, 10, 10, HeatmapScale::Length(10.0), 0.05).is_err());
    }

    #[test]
    fn losses() {
        let right = UnitVectorField::from_cell_fn(4, 3, |_| Point2::new(1.0, 0.0));
        let down = UnitVectorField::from_cell_fn(4, 3, |_| Point2::new(0.0, 1.0));
        assert_eq!(field_l2_loss(&right, &right).unwrap(), 0.0);
        assert_eq!(field_l2_loss(&right, &down).unwrap(), 2.0);
        let other = UnitVectorField::from_cell_fn(3, 3, |_| Point2::new(1.0, 0.0));
        assert!(field_l2_loss(&right, &other).is_err());

        let t = ScalarGrid::new(1, 1, vec![1.0]).unwrap();
        let p = ScalarGrid::new(1, 1, vec![0.0]).unwrap();
        assert_eq!(heatmap_weighted_l2_loss(&p, &t, 10.0).unwrap(), 11.0);
        assert_eq!(heatmap_weighted_l2_loss(&t, &t, 10.0).unwrap(), 0.0);
        assert!(heatmap_weighted_l2_loss(&p, &t, -1.0).is_err());
    }

    #[test]
    fn sample_constant_and_nodes() {
        let f = build_uvf(&vertical(), 12, 12, FieldMode::Vertex).unwrap();
        assert_eq!(f.sample(Point2::new(5.0, 5.0), 1e-3).unwrap(), f.get(5, 5));
        let c = UnitVectorField::from_cell_fn(5, 5, |_| Point2::new(1.0, 0.0));
        assert_eq!(
            c.sample(Point2::new(2.3, 1.7), 1e-3).unwrap(),
            Point2::new(1.0, 0.0)
        );
        assert!(matches!(
            c.sample(Point2::new(4.5, 1.0), 1e-3),
            Err(Error::OutOfBounds { .. })
        ));
    }

    #[test]
    fn sample_renormalizes_quad_average() {
        let f = UnitVectorField::from_cell_fn(2, 2, |c| {
            if c.y == 0.0 {
                Point2::new(1.0, 0.0)
            } else {
                Point2::new(0.0, 1.0)
            }
        });
        let v = f.sample(Point2::new(0.5, 0.5), 1e-3).unwrap();
        let h = 0.5f64.sqrt();
        assert!((v.x - h).abs() < 1e-12 && (v.y - h).abs() < 1e-12);
    }

    #[test]
    fn sample_reports_cancellation() {
        let f = UnitVectorField::from_cell_fn(2, 1 + 1, |c| {
            if c.x == 0.0 {
                Point2::new(1.0, 0.0)
            } else {
                Point2::new(-1.0, 0.0)
            }
        });
        assert!(matches!(
            f.sample(Point2::new(0.5, 0.0), 1e-3),
            Err(Error::DegenerateField { .. })
        ));
    }

    #[test]
    fn from_raw_normalizes() {
        let f = UnitVectorField::from_raw(1, 2, vec![3.0, 0.0], vec![4.0, -2.0]).unwrap();
        assert_eq!(f.get(0, 0), Point2::new(0.6, 0.8));
        assert_eq!(f.get(1, 0), Point2::new(0.0, -1.0));
        assert!(UnitVectorField::from_raw(1, 1, vec![0.0], vec![0.0]).is_err());
        assert!(UnitVectorField::new(1, 1, vec![0.5], vec![0.5]).is_err());
    }
}
