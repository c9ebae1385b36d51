//! Landmark annotation documents (JSON).
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "image": { "width": 400, "height": 300 },
//!   "contours": [
//!     { "side": "left", "closed": false, "vertices": [[120.5, 40.0], [118.0, 61.25]] }
//!   ]
//! }
//! ```
//!
//! Fields not listed here are kept and written back unchanged.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Polyline};
use crate::io::write_atomic;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageSize {
    pub width: usize,
    pub height: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<String>,
    #[serde(default)]
    pub closed: bool,
    pub vertices: Vec<[f64; 2]>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl ContourRecord {
    pub fn from_polyline(poly: &Polyline, side: Option<String>) -> Self {
        Self {
            side,
            closed: poly.is_closed(),
            vertices: poly.vertices().iter().map(|&p| p.into()).collect(),
            extra: Map::new(),
        }
    }

    pub fn polyline(&self) -> Result<Polyline> {
        Polyline::new(
            self.vertices.iter().map(|&v| Point2::from(v)).collect(),
            self.closed,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandmarkDocument {
    pub schema_version: u32,
    pub image: ImageSize,
    pub contours: Vec<ContourRecord>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl LandmarkDocument {
    pub fn new(image: ImageSize, contours: Vec<ContourRecord>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            image,
            contours,
            extra: Map::new(),
        }
    }

    /// Parses and validates: every contour must form a valid polyline.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: LandmarkDocument = serde_json::from_str(text).map_err(|e| Error::Format {
            offset: byte_offset(text, e.line(), e.column()),
            message: e.to_string(),
        })?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::invalid(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        if self.image.width == 0 || self.image.height == 0 {
            return Err(Error::invalid("image dimensions must be positive"));
        }
        for (i, c) in self.contours.iter().enumerate() {
            c.polyline()
                .map_err(|e| Error::invalid(format!("contour {i}: {e}")))?;
        }
        Ok(())
    }

    pub fn polylines(&self) -> Result<Vec<Polyline>> {
        self.contours.iter().map(ContourRecord::polyline).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        write_atomic(path.as_ref(), self.to_json().as_bytes())
    }
}

fn byte_offset(text: &str, line: usize, column: usize) -> u64 {
    if line == 0 {
        return 0;
    }
    let line_start: usize = text
        .split_inclusive('\n')
        .take(line - 1)
        .map(str::len)
        .sum();
    (line_start + column.saturating_sub(1)) as u64
}
