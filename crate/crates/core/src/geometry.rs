//! 2D primitives shared by every other module.
//!
//! Coordinates are image coordinates: `x` is the column axis (rightward),
//! `y` is the row axis (downward). The center of grid cell `(row, col)`
//! sits at `(x = col, y = row)`.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn distance_sq(self, other: Point2) -> f64 {
        let d = self - other;
        d.dot(d)
    }

    /// Unit vector in the same direction, or `None` for a (near) zero vector.
    pub fn normalized(self) -> Option<Point2> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| Point2::new(self.x / n, self.y / n))
    }

    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        Point2::new(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
        )
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Point2::new(x, y)
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

/// Result of a closest-point query against a polyline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosestPoint {
    pub foot: Point2,
    /// Ordinal of the segment holding `foot`; for a closed polyline the
    /// implicit closing segment has ordinal `len - 1`.
    pub segment: usize,
    pub distance: f64,
}

/// Ordered landmark vertices, open or closed.
///
/// A closed polyline stores each vertex once; the segment from the last
/// vertex back to the first is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    vertices: Vec<Point2>,
    closed: bool,
}

impl Polyline {
    pub fn new(vertices: Vec<Point2>, closed: bool) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::invalid(format!(
                "polyline needs at least 2 vertices, got {}",
                vertices.len()
            )));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::invalid(format!("vertex {i} is not finite")));
        }
        if let Some(i) = vertices.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!(
                "vertices {i} and {} coincide",
                i + 1
            )));
        }
        if closed {
            if vertices.len() < 3 {
                return Err(Error::invalid("closed polyline needs at least 3 vertices"));
            }
            if vertices.first() == vertices.last() {
                return Err(Error::invalid(
                    "closed polyline must not repeat its first vertex",
                ));
            }
        }
        Ok(Self { vertices, closed })
    }

    pub fn open(vertices: Vec<Point2>) -> Result<Self> {
        Self::new(vertices, false)
    }

    pub fn closed(vertices: Vec<Point2>) -> Result<Self> {
        Self::new(vertices, true)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point2> {
        self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn first(&self) -> Point2 {
        self.vertices[0]
    }

    pub fn last(&self) -> Point2 {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    /// Endpoints of segment `i`, oriented from vertex `i` to its successor.
    pub fn segment(&self, i: usize) -> (Point2, Point2) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        (0..self.segment_count()).map(move |i| self.segment(i))
    }

    /// Total arc length, including the closing segment when closed.
    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| a.distance(b)).sum()
    }

    /// Unit tangent of segment `i`, pointing toward the next vertex.
    pub fn segment_tangent(&self, i: usize) -> Point2 {
        let (a, b) = self.segment(i);
        // Consecutive vertices are distinct, so this never fails.
        (b - a).normalized().unwrap_or(Point2::new(1.0, 0.0))
    }

    /// Tangent assigned to vertex `i`: the outgoing segment, or the incoming
    /// one at the last vertex of an open polyline.
    pub fn vertex_tangent(&self, i: usize) -> Point2 {
        if !self.closed && i == self.vertices.len() - 1 {
            self.segment_tangent(i - 1)
        } else {
            self.segment_tangent(i)
        }
    }

    pub fn translated(&self, offset: Point2) -> Polyline {
        Polyline {
            vertices: self.vertices.iter().map(|&p| p + offset).collect(),
            closed: self.closed,
        }
    }
}

/// Closest point on segment `ab` to `p`.
pub fn closest_on_segment(a: Point2, b: Point2, p: Point2) -> Point2 {
    let ab = b - a;
    let len_sq = ab.dot(ab);
    if len_sq == 0.0 {
        return a;
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    if t == 0.0 {
        a
    } else if t == 1.0 {
        b
    } else {
        a + ab * t
    }
}

/// Vertex closest to `p`; ties go to the lowest index.
pub fn nearest_vertex(poly: &Polyline, p: Point2) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, &v) in poly.vertices().iter().enumerate() {
        let d = v.distance_sq(p);
        if d < best.1 {
            best = (i, d);
        }
    }
    (best.0, best.1.sqrt())
}

/// Closest point on the union of segments; ties go to the lowest segment.
pub fn nearest_point_on_polyline(poly: &Polyline, p: Point2) -> ClosestPoint {
    let mut best = ClosestPoint {
        foot: poly.first(),
        segment: 0,
        distance: f64::INFINITY,
    };
    let mut best_sq = f64::INFINITY;
    for (i, (a, b)) in poly.segments().enumerate() {
        let foot = closest_on_segment(a, b, p);
        let d = foot.distance_sq(p);
        if d < best_sq {
            best_sq = d;
            best = ClosestPoint {
                foot,
                segment: i,
                distance: 0.0,
            };
        }
    }
    best.distance = best_sq.sqrt();
    best
}

/// `k` points at uniform arc-length spacing along an open polyline.
///
/// The first and last output points are the polyline's endpoints, bit for bit.
pub fn resample_uniform(poly: &Polyline, k: usize) -> Result<Polyline> {
    if k < 2 {
        return Err(Error::invalid(format!(
            "resample count must be >= 2, got {k}"
        )));
    }
    if poly.is_closed() {
        return Err(Error::invalid("resample_uniform expects an open polyline"));
    }
    let verts = poly.vertices();
    let mut cumulative = Vec::with_capacity(verts.len());
    let mut acc = 0.0;
    cumulative.push(0.0);
    for w in verts.windows(2) {
        acc += w[0].distance(w[1]);
        cumulative.push(acc);
    }
    let total = acc;

    let mut out = Vec::with_capacity(k);
    out.push(poly.first());
    let mut seg = 0;
    for i in 1..k - 1 {
        let target = total * i as f64 / (k - 1) as f64;
        while seg + 1 < verts.len() - 1 && cumulative[seg + 1] < target {
            seg += 1;
        }
        let seg_len = cumulative[seg + 1] - cumulative[seg];
        let t = ((target - cumulative[seg]) / seg_len).clamp(0.0, 1.0);
        out.push(verts[seg].lerp(verts[seg + 1], t));
    }
    out.push(poly.last());
    Polyline::open(out)
}

/// Per-axis scale followed by translation: `p' = scale * p + translate`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap2 {
    pub scale_x: f64,
    pub scale_y: f64,
    pub translate_x: f64,
    pub translate_y: f64,
}

impl AffineMap2 {
    pub const IDENTITY: AffineMap2 = AffineMap2 {
        scale_x: 1.0,
        scale_y: 1.0,
        translate_x: 0.0,
        translate_y: 0.0,
    };

    pub fn new(scale_x: f64, scale_y: f64, translate_x: f64, translate_y: f64) -> Result<Self> {
        if !(scale_x > 0.0 && scale_y > 0.0 && scale_x.is_finite() && scale_y.is_finite()) {
            return Err(Error::invalid(
                "affine scale factors must be positive and finite",
            ));
        }
        if !(translate_x.is_finite() && translate_y.is_finite()) {
            return Err(Error::invalid("affine translation must be finite"));
        }
        Ok(Self {
            scale_x,
            scale_y,
            translate_x,
            translate_y,
        })
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        Point2::new(
            self.scale_x * p.x + self.translate_x,
            self.scale_y * p.y + self.translate_y,
        )
    }

    pub fn inverse(&self) -> AffineMap2 {
        AffineMap2 {
            scale_x: 1.0 / self.scale_x,
            scale_y: 1.0 / self.scale_y,
            translate_x: -self.translate_x / self.scale_x,
            translate_y: -self.translate_y / self.scale_y,
        }
    }

    /// `self` after `first`: `p -> self(first(p))`.
    pub fn compose(&self, first: &AffineMap2) -> AffineMap2 {
        AffineMap2 {
            scale_x: self.scale_x * first.scale_x,
            scale_y: self.scale_y * first.scale_y,
            translate_x: self.scale_x * first.translate_x + self.translate_x,
            translate_y: self.scale_y * first.translate_y + self.translate_y,
        }
    }

    pub fn apply_polyline(&self, poly: &Polyline) -> Result<Polyline> {
        Polyline::new(
            poly.vertices().iter().map(|&p| self.apply(p)).collect(),
            poly.is_closed(),
        )
    }
}

/// Maps original-image coordinates into a `target`x`target` frame.
///
/// The short axis is zero-padded on the right/bottom to make the image
/// square, then the square is scaled uniformly by `target / max(w, h)`.
/// Padding on the far side keeps the origin fixed, so no translation is
/// needed.
pub fn square_resize_map(width: usize, height: usize, target: usize) -> Result<AffineMap2> {
    if width == 0 || height == 0 || target == 0 {
        return Err(Error::invalid("image and target sizes must be positive"));
    }
    let s = target as f64 / width.max(height) as f64;
    AffineMap2::new(s, s, 0.0, 0.0)
}
