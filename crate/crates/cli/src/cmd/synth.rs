use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::ValueEnum;
use rayon::prelude::*;
use serde_json::{json, Value};
use uvf_core::bench::noise_seed;
use uvf_core::io::{ContourRecord, ImageSize};
use uvf_core::{
    make_scene_with, GridStack, LandmarkDocument, NoiseSpec, SceneKind, SceneParams, SceneTargets,
};

use crate::common::{ensure_dir, save_doc, save_grid, save_text, ModeArg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Open,
    Circle,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long)]
    out_dir: PathBuf,
    /// Square grid size in pixels.
    #[arg(long, default_value_t = 224)]
    size: usize,
    #[arg(long, value_enum, default_value_t = KindArg::Open)]
    kind: KindArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Vertex)]
    mode: ModeArg,
    /// Per-cell angular noise (degrees) applied to the written field.
    #[arg(long, default_value_t = 0.0)]
    angular_noise: f64,
}

pub fn run(args: Args) -> Result<()> {
    let out = ensure_dir(&args.out_dir)?;
    let params = SceneParams {
        mode: args.mode.into(),
        ..SceneParams::default()
    };
    let kind = match args.kind {
        KindArg::Open => SceneKind::Open,
        KindArg::Circle => SceneKind::Circle,
    };
    let entries = (0..args.count)
        .into_par_iter()
        .map(|i| -> Result<Value> {
            let seed = args.seed.wrapping_add(i as u64);
            let mut scene = make_scene_with(seed, args.size, args.size, kind, &params)
                .with_context(|| format!("scene seed {seed}"))?;
            if args.angular_noise > 0.0 {
                scene = scene
                    .with_noise(NoiseSpec::angular(args.angular_noise, noise_seed(seed, 0)))?;
            }
            let name = format!("scene_{i:04}");
            let dir = ensure_dir(&out.join(&name))?;
            save_grid(
                &dir.join("uvf.uvfg"),
                &GridStack::from_field(scene.targets.uvf()),
            )?;
            let mut record = ContourRecord::from_polyline(&scene.gt, None);
            match &scene.targets {
                SceneTargets::Open(t) => {
                    save_grid(
                        &dir.join("start.uvfg"),
                        &GridStack::from_scalar(t.start_heatmap.grid()),
                    )?;
                    save_grid(
                        &dir.join("end.uvfg"),
                        &GridStack::from_scalar(t.end_heatmap.grid()),
                    )?;
                }
                SceneTargets::Closed { circle, .. } => {
                    record.extra.insert(
                        "circle".into(),
                        json!({
                            "center": [circle.center.x, circle.center.y],
                            "radius": circle.radius,
                        }),
                    );
                }
            }
            let mut doc = LandmarkDocument::new(
                ImageSize {
                    width: args.size,
                    height: args.size,
                },
                vec![record],
            );
            doc.extra.insert("seed".into(), Value::from(seed));
            save_doc(&dir.join("landmarks.json"), &doc)?;
            Ok(json!({ "dir": name, "seed": seed }))
        })
        .collect::<Result<Vec<_>>>()?;

    let manifest = json!({
        "seed": args.seed,
        "count": args.count,
        "size": args.size,
        "kind": format!("{:?}", args.kind).to_lowercase(),
        "mode": format!("{:?}", args.mode).to_lowercase(),
        "angular_noise_deg": args.angular_noise,
        "scenes": entries,
    });
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    save_text(&out.join("manifest.json"), &text)
}
