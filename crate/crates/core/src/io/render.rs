//! PNG overlays: field angle maps, heatmaps and contour strokes.

use std::io::Cursor;
use std::path::Path;

use image::{ImageFormat, Rgb, RgbImage};

use crate::error::{Error, Result};
use crate::geometry::Polyline;
use crate::grid::ScalarGrid;
use crate::io::write_atomic;
use crate::targets::UnitVectorField;

/// Stroke colour follows the contour's role.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrokeRole {
    Left,
    Right,
    GroundTruth,
    Other,
}

impl StrokeRole {
    pub fn color(self) -> [u8; 3] {
        match self {
            StrokeRole::Left => [255, 0, 0],
            StrokeRole::Right => [0, 255, 0],
            StrokeRole::GroundTruth => [255, 255, 0],
            StrokeRole::Other => [255, 255, 255],
        }
    }

    /// `left`/`right` (case-insensitive) map to their roles, anything else
    /// to [`StrokeRole::Other`].
    pub fn from_side(side: Option<&str>) -> Self {
        match side.map(str::to_ascii_lowercase).as_deref() {
            Some("left") => StrokeRole::Left,
            Some("right") => StrokeRole::Right,
            _ => StrokeRole::Other,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Overlay {
    pub background: Option<ScalarGrid>,
    pub field: Option<UnitVectorField>,
    pub heatmaps: Vec<(ScalarGrid, [u8; 3])>,
    pub strokes: Vec<(Polyline, StrokeRole)>,
}

impl Overlay {
    fn dims(&self) -> Result<(usize, usize)> {
        let mut dims = None;
        let mut check = |d: (usize, usize), what: &str| -> Result<()> {
            match dims {
                None => dims = Some(d),
                Some(prev) if prev != d => {
                    return Err(Error::invalid(format!(
                        "{what} is {}x{}, expected {}x{}",
                        d.0, d.1, prev.0, prev.1
                    )))
                }
                _ => {}
            }
            Ok(())
        };
        if let Some(bg) = &self.background {
            check(bg.dims(), "background")?;
        }
        if let Some(f) = &self.field {
            check(f.dims(), "field")?;
        }
        for (h, _) in &self.heatmaps {
            check(h.dims(), "heatmap")?;
        }
        dims.ok_or_else(|| Error::invalid("overlay needs a background, field or heatmap"))
    }
}

/// Direction angle in degrees, in `[0, 360)`; image coordinates (y down).
pub fn angle_degrees(vx: f64, vy: f64) -> f64 {
    vy.atan2(vx).to_degrees().rem_euclid(360.0)
}

/// Fully saturated colour for a hue in degrees.
pub fn hue_to_rgb(hue: f64) -> [u8; 3] {
    let h = hue.rem_euclid(360.0) / 60.0;
    let x = 1.0 - (h % 2.0 - 1.0).abs();
    let (r, g, b) = match h as u32 {
        0 => (1.0, x, 0.0),
        1 => (x, 1.0, 0.0),
        2 => (0.0, 1.0, x),
        3 => (0.0, x, 1.0),
        4 => (x, 0.0, 1.0),
        _ => (1.0, 0.0, x),
    };
    let q = |c: f64| (c * 255.0).round() as u8;
    [q(r), q(g), q(b)]
}

pub fn render_overlay(overlay: &Overlay) -> Result<RgbImage> {
    let (w, h) = overlay.dims()?;
    let mut img = RgbImage::new(w as u32, h as u32);

    if let Some(bg) = &overlay.background {
        let (lo, hi) = bg
            .values()
            .iter()
            .filter(|v| v.is_finite())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        let span = if hi > lo { hi - lo } else { 1.0 };
        for (x, y, px) in img.enumerate_pixels_mut() {
            let v = bg.get(y as usize, x as usize);
            let g = if v.is_finite() {
                ((v - lo) / span * 255.0).round() as u8
            } else {
                0
            };
            *px = Rgb([g, g, g]);
        }
    }

    if let Some(field) = &overlay.field {
        let alpha = if overlay.background.is_some() {
            0.5
        } else {
            1.0
        };
        for (x, y, px) in img.enumerate_pixels_mut() {
            let v = field.get(y as usize, x as usize);
            let c = hue_to_rgb(angle_degrees(v.x, v.y));
            blend(px, c, alpha);
        }
    }

    for (hm, color) in &overlay.heatmaps {
        for (x, y, px) in img.enumerate_pixels_mut() {
            let v = hm.get(y as usize, x as usize);
            if v.is_finite() && v > 0.0 {
                blend(px, *color, 0.7 * v.min(1.0));
            }
        }
    }

    for (poly, role) in &overlay.strokes {
        stroke(&mut img, poly, role.color());
    }
    Ok(img)
}

fn blend(px: &mut Rgb<u8>, color: [u8; 3], alpha: f64) {
    for (dst, src) in px.0.iter_mut().zip(color) {
        *dst = (*dst as f64 * (1.0 - alpha) + src as f64 * alpha).round() as u8;
    }
}

/// Marks every pixel whose center is nearest to a sample taken at most
/// half a pixel apart along each segment.
fn stroke(img: &mut RgbImage, poly: &Polyline, color: [u8; 3]) {
    let (w, h) = (img.width() as i64, img.height() as i64);
    for (a, b) in poly.segments() {
        let n = (a.distance(b) * 2.0).ceil().max(1.0) as usize;
        for i in 0..=n {
            let p = a.lerp(b, i as f64 / n as f64);
            let (x, y) = (p.x.round() as i64, p.y.round() as i64);
            if (0..w).contains(&x) && (0..h).contains(&y) {
                img.put_pixel(x as u32, y as u32, Rgb(color));
            }
        }
    }
}

pub fn encode_png(img: &RgbImage) -> Result<Vec<u8>> {
    let mut buf = Cursor::new(Vec::new());
    img.write_to(&mut buf, ImageFormat::Png)
        .map_err(|e| Error::Image {
            path: "<memory>".into(),
            source: e,
        })?;
    Ok(buf.into_inner())
}

pub fn write_overlay(path: impl AsRef<Path>, overlay: &Overlay) -> Result<()> {
    let img = render_overlay(overlay)?;
    write_atomic(path.as_ref(), &encode_png(&img)?)
}
