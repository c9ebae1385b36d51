use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde_json::{json, Value};
use uvf_core::io::{ContourRecord, ImageSize};
use uvf_core::targets::{DEFAULT_K_AREA, DEFAULT_K_LENGTH};
use uvf_core::{
    build_endpoint_heatmaps, build_uvf, square_resize_map, AffineMap2, GridStack, HeatmapScale,
    LandmarkDocument,
};

use crate::common::{ensure_dir, load_doc, save_doc, save_grid, slug, ModeArg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScaleArg {
    Length,
    Area,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Landmark document.
    #[arg(long)]
    landmarks: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Vertex)]
    mode: ModeArg,
    /// Scale the image so its longer side is N pixels and pad to N x N.
    #[arg(long, value_name = "N")]
    resize: Option<usize>,
    #[arg(long, value_enum, default_value_t = ScaleArg::Length)]
    heatmap_scale: ScaleArg,
    /// Object area in target-frame square pixels, for `--heatmap-scale area`.
    #[arg(long, required_if_eq("heatmap_scale", "area"))]
    area: Option<f64>,
    /// Heatmap scaling constant; defaults depend on the scale kind.
    #[arg(long)]
    k: Option<f64>,
}

pub fn run(args: Args) -> Result<()> {
    let doc = load_doc(&args.landmarks)?;
    let (w0, h0) = (doc.image.width, doc.image.height);
    let (map, w, h) = match args.resize {
        Some(n) => (square_resize_map(w0, h0, n)?, n, n),
        None => (AffineMap2::IDENTITY, w0, h0),
    };
    let out = ensure_dir(&args.out_dir)?;

    let mut records = Vec::with_capacity(doc.contours.len());
    for (i, record) in doc.contours.iter().enumerate() {
        let poly = map
            .apply_polyline(&record.polyline()?)
            .with_context(|| format!("contour {i}"))?;
        let stem = match &record.side {
            Some(side) => format!("contour{i}_{}", slug(side)),
            None => format!("contour{i}"),
        };
        let mut files = serde_json::Map::new();

        let uvf =
            build_uvf(&poly, w, h, args.mode.into()).with_context(|| format!("contour {i}"))?;
        let name = format!("{stem}_uvf.uvfg");
        save_grid(&out.join(&name), &GridStack::from_field(&uvf))?;
        files.insert("uvf".into(), Value::String(name));

        if !poly.is_closed() {
            let (scale, default_k) = match args.heatmap_scale {
                ScaleArg::Length => (HeatmapScale::Length(poly.length()), DEFAULT_K_LENGTH),
                ScaleArg::Area => match args.area {
                    Some(a) => (HeatmapScale::Area(a), DEFAULT_K_AREA),
                    None => bail!("--heatmap-scale area needs --area"),
                },
            };
            let (start, end) =
                build_endpoint_heatmaps(&poly, w, h, scale, args.k.unwrap_or(default_k))
                    .with_context(|| format!("contour {i}"))?;
            for (role, hm) in [("start", start), ("end", end)] {
                let name = format!("{stem}_{role}.uvfg");
                save_grid(&out.join(&name), &GridStack::from_scalar(hm.grid()))?;
                files.insert(role.into(), Value::String(name));
            }
        }

        let mut rec = ContourRecord::from_polyline(&poly, record.side.clone());
        rec.extra = record.extra.clone();
        rec.extra.insert("files".into(), Value::Object(files));
        records.push(rec);
    }

    let mut targets = LandmarkDocument::new(
        ImageSize {
            width: w,
            height: h,
        },
        records,
    );
    targets.extra = doc.extra.clone();
    targets.extra.insert(
        "transform".into(),
        json!({
            "scale_x": map.scale_x,
            "scale_y": map.scale_y,
            "translate_x": map.translate_x,
            "translate_y": map.translate_y,
        }),
    );
    save_doc(&out.join("targets.json"), &targets)
}
