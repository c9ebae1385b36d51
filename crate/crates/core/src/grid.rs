use crate::error::{Error, Result};
use crate::geometry::Point2;

/// Row-major `height x width` grid of scalars with cell centers at integer
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarGrid {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl ScalarGrid {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("grid dimensions must be positive"));
        }
        if values.len() != width * height {
            return Err(Error::invalid(format!(
                "grid {width}x{height} needs {} values, got {}",
                width * height,
                values.len()
            )));
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                values.push(f(row, col));
            }
        }
        Self {
            width,
            height,
            values,
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

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    pub fn contains(&self, p: Point2) -> bool {
        in_bounds(p, self.width, self.height)
    }

    /// Bilinear sample at a continuous position; `None` outside the grid.
    pub fn sample_bilinear(&self, p: Point2) -> Option<f64> {
        let c = BilinearCell::locate(p, self.width, self.height)?;
        Some(c.blend(|r, col| self.get(r, col)))
    }
}

pub(crate) fn in_bounds(p: Point2, width: usize, height: usize) -> bool {
    p.x >= 0.0 && p.y >= 0.0 && p.x <= (width - 1) as f64 && p.y <= (height - 1) as f64
}

/// The four cells surrounding a continuous position and their weights.
pub(crate) struct BilinearCell {
    row0: usize,
    row1: usize,
    col0: usize,
    col1: usize,
    fx: f64,
    fy: f64,
}

impl BilinearCell {
    pub(crate) fn locate(p: Point2, width: usize, height: usize) -> Option<Self> {
        if !in_bounds(p, width, height) {
            return None;
        }
        let col0 = (p.x.floor() as usize).min(width - 1);
        let row0 = (p.y.floor() as usize).min(height - 1);
        Some(Self {
            row0,
            col0,
            row1: (row0 + 1).min(height - 1),
            col1: (col0 + 1).min(width - 1),
            fx: p.x - col0 as f64,
            fy: p.y - row0 as f64,
        })
    }

    /// The single cell this position sits on, if it is exactly a node.
    pub(crate) fn node(&self) -> Option<(usize, usize)> {
        (self.fx == 0.0 && self.fy == 0.0).then_some((self.row0, self.col0))
    }

    pub(crate) fn blend(&self, f: impl Fn(usize, usize) -> f64) -> f64 {
        let top = f(self.row0, self.col0) * (1.0 - self.fx) + f(self.row0, self.col1) * self.fx;
        let bottom = f(self.row1, self.col0) * (1.0 - self.fx) + f(self.row1, self.col1) * self.fx;
        top * (1.0 - self.fy) + bottom * self.fy
    }
}
