use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use serde_json::Value;
use uvf_core::io::{write_overlay, ContourRecord, ImageSize, Overlay, StrokeRole};
use uvf_core::{walk_closed, walk_open, LandmarkDocument, Point2};

use crate::common::{load_field, load_scalar, parse_point, save_doc, WalkArgs};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Two-channel field grid.
    #[arg(long)]
    uvf: PathBuf,
    /// Start heatmap grid (open walk).
    #[arg(long, requires = "end", conflicts_with = "seed_point")]
    start: Option<PathBuf>,
    /// End heatmap grid (open walk).
    #[arg(long, requires = "start")]
    end: Option<PathBuf>,
    /// Seed `x,y` for a closed walk.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    seed_point: Option<Point2>,
    /// Output contour document.
    #[arg(long)]
    out: PathBuf,
    /// Optional PNG overlay of the field and the walked contour.
    #[arg(long)]
    overlay: Option<PathBuf>,
    /// Side label stored with the contour.
    #[arg(long)]
    side: Option<String>,
    #[command(flatten)]
    walk: WalkArgs,
}

pub fn run(args: Args) -> Result<()> {
    let cfg = args.walk.config()?;
    let field = load_field(&args.uvf)?;
    let mut heatmaps = Vec::new();
    let walked = match (&args.start, &args.end, args.seed_point) {
        (Some(s), Some(e), None) => {
            let start = load_scalar(s)?;
            let end = load_scalar(e)?;
            let w = walk_open(&field, &start, &end, &cfg)?;
            heatmaps = vec![(start, [0, 255, 255]), (end, [255, 0, 255])];
            w
        }
        (None, None, Some(seed)) => walk_closed(&field, seed, &cfg)?,
        _ => bail!("give either --start and --end, or --seed-point"),
    };
    let poly = walked.to_polyline().ok_or_else(|| {
        anyhow!(
            "walk from {} produced no contour ({} after {} steps)",
            args.uvf.display(),
            walked.termination.as_str(),
            walked.steps
        )
    })?;

    let mut record = ContourRecord::from_polyline(&poly, args.side.clone());
    record.extra.insert(
        "termination".into(),
        Value::from(walked.termination.as_str()),
    );
    record
        .extra
        .insert("steps".into(), Value::from(walked.steps));
    let (width, height) = field.dims();
    let doc = LandmarkDocument::new(ImageSize { width, height }, vec![record]);
    save_doc(&args.out, &doc)?;

    if let Some(path) = &args.overlay {
        let overlay = Overlay {
            background: None,
            field: Some(field),
            heatmaps,
            strokes: vec![(poly, StrokeRole::from_side(args.side.as_deref()))],
        };
        write_overlay(path, &overlay).map_err(|e| anyhow!("writing {}: {e}", path.display()))?;
    }
    Ok(())
}
