use std::path::PathBuf;

use anyhow::{anyhow, Result};
use uvf_core::io::{write_overlay, Overlay, StrokeRole};

use crate::common::{load_doc, load_field, load_scalar};

const HEATMAP_COLORS: [[u8; 3]; 3] = [[0, 255, 255], [255, 0, 255], [0, 128, 255]];

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Output PNG.
    #[arg(long)]
    out: PathBuf,
    /// Single-channel grid drawn in grayscale underneath everything.
    #[arg(long)]
    background: Option<PathBuf>,
    /// Two-channel field drawn as an angle map.
    #[arg(long)]
    uvf: Option<PathBuf>,
    /// Heatmap grids (repeatable).
    #[arg(long)]
    heatmap: Vec<PathBuf>,
    /// Ground-truth landmark documents, stroked in yellow.
    #[arg(long)]
    gt: Vec<PathBuf>,
    /// Contour documents, coloured by side.
    #[arg(long)]
    contours: Vec<PathBuf>,
}

pub fn run(args: Args) -> Result<()> {
    let mut overlay = Overlay {
        background: args.background.as_deref().map(load_scalar).transpose()?,
        field: args.uvf.as_deref().map(load_field).transpose()?,
        ..Overlay::default()
    };
    for (i, path) in args.heatmap.iter().enumerate() {
        overlay
            .heatmaps
            .push((load_scalar(path)?, HEATMAP_COLORS[i % HEATMAP_COLORS.len()]));
    }
    for path in &args.gt {
        for poly in load_doc(path)?.polylines()? {
            overlay.strokes.push((poly, StrokeRole::GroundTruth));
        }
    }
    for path in &args.contours {
        let doc = load_doc(path)?;
        for record in &doc.contours {
            let role = StrokeRole::from_side(record.side.as_deref());
            overlay.strokes.push((record.polyline()?, role));
        }
    }
    write_overlay(&args.out, &overlay).map_err(|e| anyhow!("writing {}: {e}", args.out.display()))
}
