//! File formats and rendering.

pub mod grid_file;
pub mod landmarks;
pub mod render;

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

pub use grid_file::{decode_grid, encode_grid, read_grid, write_grid, GridStack};
pub use landmarks::{ContourRecord, ImageSize, LandmarkDocument};
pub use render::{render_overlay, write_overlay, Overlay, StrokeRole};

/// Writes `bytes` to a temporary file next to `path`, then renames it over
/// `path`, so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
