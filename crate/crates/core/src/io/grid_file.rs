//! `UVFG` grid container.
//!
//! Layout (little-endian, 16-byte header):
//!
//! | offset | size | field                           |
//! |--------|------|---------------------------------|
//! | 0      | 4    | magic `b"UVFG"`                 |
//! | 4      | 2    | version, `u16` = 1              |
//! | 6      | 1    | dtype, `u8` = 1 (float32)       |
//! | 7      | 1    | channels, `u8`                  |
//! | 8      | 4    | height, `u32`                   |
//! | 12     | 4    | width, `u32`                    |
//! | 16     | ...  | `f32` payload, channel-major, then row-major |
//!
//! The payload is exactly `channels * height * width * 4` bytes; trailing
//! bytes are rejected.

use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::ScalarGrid;
use crate::io::write_atomic;
use crate::targets::UnitVectorField;

pub const MAGIC: [u8; 4] = *b"UVFG";
pub const VERSION: u16 = 1;
pub const DTYPE_F32: u8 = 1;
pub const HEADER_LEN: usize = 16;

/// One or more same-sized `f32` channels.
#[derive(Debug, Clone, PartialEq)]
pub struct GridStack {
    width: usize,
    height: usize,
    channels: Vec<Vec<f32>>,
}

impl GridStack {
    pub fn new(width: usize, height: usize, channels: Vec<Vec<f32>>) -> Result<Self> {
        if channels.is_empty() || channels.len() > u8::MAX as usize {
            return Err(Error::invalid(format!(
                "grid files hold 1..=255 channels, got {}",
                channels.len()
            )));
        }
        if width == 0
            || height == 0
            || u32::try_from(width).is_err()
            || u32::try_from(height).is_err()
        {
            return Err(Error::invalid(format!(
                "unsupported grid size {width}x{height}"
            )));
        }
        if let Some(i) = channels.iter().position(|c| c.len() != width * height) {
            return Err(Error::invalid(format!(
                "channel {i} has {} values, expected {}",
                channels[i].len(),
                width * height
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> &[Vec<f32>] {
        &self.channels
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    pub fn from_field(field: &UnitVectorField) -> Self {
        let to32 = |v: &[f64]| v.iter().map(|&x| x as f32).collect();
        Self {
            width: field.width(),
            height: field.height(),
            channels: vec![to32(field.vx()), to32(field.vy())],
        }
    }

    pub fn from_scalar(grid: &ScalarGrid) -> Self {
        Self {
            width: grid.width(),
            height: grid.height(),
            channels: vec![grid.values().iter().map(|&x| x as f32).collect()],
        }
    }

    /// Two-channel stack as a field; components are renormalized.
    pub fn to_field(&self) -> Result<UnitVectorField> {
        if self.channels.len() != 2 {
            return Err(Error::invalid(format!(
                "a vector field needs 2 channels, file has {}",
                self.channels.len()
            )));
        }
        let to64 = |v: &[f32]| v.iter().map(|&x| x as f64).collect();
        UnitVectorField::from_raw(
            self.width,
            self.height,
            to64(&self.channels[0]),
            to64(&self.channels[1]),
        )
    }

    pub fn to_scalar(&self, channel: usize) -> Result<ScalarGrid> {
        let values = self
            .channels
            .get(channel)
            .ok_or_else(|| Error::invalid(format!("no channel {channel}")))?;
        ScalarGrid::new(
            self.width,
            self.height,
            values.iter().map(|&x| x as f64).collect(),
        )
    }

    pub fn to_scalars(&self) -> Result<Vec<ScalarGrid>> {
        (0..self.channels.len())
            .map(|c| self.to_scalar(c))
            .collect()
    }
}

pub fn encode_grid(stack: &GridStack) -> Vec<u8> {
    let n = stack.width * stack.height;
    let mut out = Vec::with_capacity(HEADER_LEN + stack.channels.len() * n * 4);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(DTYPE_F32);
    out.push(stack.channels.len() as u8);
    out.extend_from_slice(&(stack.height as u32).to_le_bytes());
    out.extend_from_slice(&(stack.width as u32).to_le_bytes());
    for channel in &stack.channels {
        for v in channel {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn decode_grid(bytes: &[u8]) -> Result<GridStack> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::format(
            bytes.len() as u64,
            format!("header needs {HEADER_LEN} bytes, file has {}", bytes.len()),
        ));
    }
    if bytes[0..4] != MAGIC {
        return Err(Error::format(0, format!("bad magic {:?}", &bytes[0..4])));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(Error::format(4, format!("unsupported version {version}")));
    }
    if bytes[6] != DTYPE_F32 {
        return Err(Error::format(6, format!("unsupported dtype {}", bytes[6])));
    }
    let channels = bytes[7] as usize;
    if channels == 0 {
        return Err(Error::format(7, "zero channels"));
    }
    let height = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let width = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
    if height == 0 {
        return Err(Error::format(8, "zero height"));
    }
    if width == 0 {
        return Err(Error::format(12, "zero width"));
    }
    // At most 255 * (2^32 - 1)^2 * 4 bytes, which overflows u64 but not u128.
    let cells = (height as u128) * (width as u128);
    let expected = cells * channels as u128 * 4;
    let payload = (bytes.len() - HEADER_LEN) as u128;
    if payload < expected {
        return Err(Error::format(
            bytes.len() as u64,
            format!("truncated payload: expected {expected} bytes, found {payload}"),
        ));
    }
    if payload > expected {
        return Err(Error::format(
            (HEADER_LEN as u128 + expected) as u64,
            format!("{} trailing bytes after payload", payload - expected),
        ));
    }
    let cells = cells as usize;
    let data = &bytes[HEADER_LEN..];
    let channels = (0..channels)
        .map(|c| {
            data[c * cells * 4..(c + 1) * cells * 4]
                .chunks_exact(4)
                .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
                .collect()
        })
        .collect();
    Ok(GridStack {
        width,
        height,
        channels,
    })
}

pub fn read_grid(path: impl AsRef<Path>) -> Result<GridStack> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_grid(&bytes)
}

pub fn write_grid(path: impl AsRef<Path>, stack: &GridStack) -> Result<()> {
    write_atomic(path.as_ref(), &encode_grid(stack))
}
