use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use uvf_core::io::{read_grid, write_atomic, write_grid};
use uvf_core::{
    FieldMode, GridStack, LandmarkDocument, RmsDirection, ScalarGrid, UnitVectorField, WalkConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Vertex,
    Segment,
}

impl From<ModeArg> for FieldMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Vertex => FieldMode::Vertex,
            ModeArg::Segment => FieldMode::Segment,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Gt2pred,
    Pred2gt,
    Sym,
}

impl From<DirectionArg> for RmsDirection {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Gt2pred => RmsDirection::GtToPred,
            DirectionArg::Pred2gt => RmsDirection::PredToGt,
            DirectionArg::Sym => RmsDirection::Symmetric,
        }
    }
}

#[derive(Debug, Clone, clap::Args)]
pub struct WalkArgs {
    /// Walk step length in pixels.
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
    /// End-heatmap value at which an open walk stops.
    #[arg(long, default_value_t = 0.5)]
    pub stop_threshold: f64,
    /// Step budget; defaults to 4 * (width + height).
    #[arg(long)]
    pub max_steps: Option<usize>,
}

impl WalkArgs {
    pub fn config(&self) -> Result<WalkConfig> {
        let cfg = WalkConfig {
            step: self.step,
            stop_threshold: self.stop_threshold,
            max_steps: self.max_steps,
            ..WalkConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn load_grid(path: &Path) -> Result<GridStack> {
    read_grid(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load_field(path: &Path) -> Result<UnitVectorField> {
    load_grid(path)?
        .to_field()
        .with_context(|| format!("reading {}", path.display()))
}

pub fn load_scalar(path: &Path) -> Result<ScalarGrid> {
    load_grid(path)?
        .to_scalar(0)
        .with_context(|| format!("reading {}", path.display()))
}

pub fn load_doc(path: &Path) -> Result<LandmarkDocument> {
    LandmarkDocument::read(path).with_context(|| format!("reading {}", path.display()))
}

pub fn save_grid(path: &Path, stack: &GridStack) -> Result<()> {
    write_grid(path, stack).with_context(|| format!("writing {}", path.display()))
}

pub fn save_doc(path: &Path, doc: &LandmarkDocument) -> Result<()> {
    doc.write(path)
        .with_context(|| format!("writing {}", path.display()))
}

pub fn save_text(path: &Path, text: &str) -> Result<()> {
    write_atomic(path, text.as_bytes()).with_context(|| format!("writing {}", path.display()))
}

pub fn ensure_dir(dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir.to_path_buf())
}

/// Parses `x,y`.
pub fn parse_point(s: &str) -> Result<uvf_core::Point2, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected x,y, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok(uvf_core::Point2::new(parse(x)?, parse(y)?))
}

/// File-name-safe form of a side label.
pub fn slug(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect()
}
