use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde_json::json;
use uvf_core::bench::{baseline_round_trip, noise_seed, round_trip, summarize, SweepRow};
use uvf_core::{
    compare_reports, make_scene_with, NoiseSpec, RmsDirection, SceneKind, SceneParams,
    SyntheticScene, Termination, DEFAULT_PROPORTIONS,
};

use crate::cmd::eval::report_csv;
use crate::common::{ensure_dir, save_text, DirectionArg, ModeArg, WalkArgs};

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long, default_value_t = 500)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 224)]
    size: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Vertex)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = DirectionArg::Gt2pred)]
    direction: DirectionArg,
    /// Angular field noise levels in degrees.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 5.0, 15.0])]
    noise: Vec<f64>,
    /// Skip the per-landmark heatmap baseline row.
    #[arg(long)]
    no_baseline: bool,
    #[arg(long, default_value = "bench-out")]
    out_dir: PathBuf,
    #[command(flatten)]
    walk: WalkArgs,
}

pub fn run(args: Args) -> Result<()> {
    let started = Instant::now();
    let cfg = args.walk.config()?;
    let direction: RmsDirection = args.direction.into();
    let params = SceneParams {
        mode: args.mode.into(),
        ..SceneParams::default()
    };
    let scenes: Vec<SyntheticScene> = (0..args.count)
        .into_par_iter()
        .map(|i| {
            let seed = args.seed.wrapping_add(i as u64);
            make_scene_with(seed, args.size, args.size, SceneKind::Open, &params)
                .with_context(|| format!("scene seed {seed}"))
        })
        .collect::<Result<_>>()?;
    let props = DEFAULT_PROPORTIONS.to_vec();

    let mut rows: Vec<SweepRow> = Vec::new();
    if !args.no_baseline {
        let errors = scenes
            .par_iter()
            .map(|s| baseline_round_trip(s, 0.0, 0, direction))
            .collect::<uvf_core::Result<Vec<f64>>>()?;
        rows.push(summarize("baseline", None, errors, &[], &props)?);
    }
    for (level, &sigma) in args.noise.iter().enumerate() {
        let results = scenes
            .par_iter()
            .map(|s| {
                let noisy;
                let scene = if sigma > 0.0 {
                    noisy = s.with_noise(NoiseSpec::angular(sigma, noise_seed(s.seed, level)))?;
                    &noisy
                } else {
                    s
                };
                round_trip(scene, &cfg, direction).map(|rt| (rt.rms, rt.walk.termination))
            })
            .collect::<uvf_core::Result<Vec<(f64, Termination)>>>()?;
        let (errors, terms): (Vec<f64>, Vec<Termination>) = results.into_iter().unzip();
        let noise = NoiseSpec::angular(sigma, 0);
        rows.push(summarize(
            format!("uvf_{sigma}deg"),
            Some(&noise),
            errors,
            &terms,
            &props,
        )?);
    }

    let out = ensure_dir(&args.out_dir)?;
    let table = table_text(&rows, &props);
    save_text(&out.join("report.txt"), &table)?;
    let csv_rows: Vec<(&str, _)> = rows.iter().map(|r| (r.label.as_str(), &r.report)).collect();
    save_text(&out.join("report.csv"), &report_csv(&csv_rows, true))?;
    save_text(&out.join("cumulative.csv"), &cumulative_csv(&rows))?;

    let comparisons = match rows.iter().find(|r| r.label == "baseline") {
        Some(base) => rows
            .iter()
            .filter(|r| r.label != "baseline")
            .map(|r| {
                let cmp = compare_reports(base.report.clone(), r.report.clone())?;
                Ok(json!({ "a": "baseline", "b": r.label, "a_minus_b": cmp.differences }))
            })
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let report = json!({
        "count": args.count,
        "seed": args.seed,
        "size": args.size,
        "mode": format!("{:?}", args.mode).to_lowercase(),
        "direction": direction,
        "step": cfg.step,
        "stop_threshold": cfg.stop_threshold,
        "proportions": props,
        "rows": rows,
        "comparisons": comparisons,
    });
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    save_text(&out.join("report.json"), &text)?;

    print!("{table}");
    eprintln!(
        "{} scenes, {} rows, {:.1} s; reports in {}",
        args.count,
        rows.len(),
        started.elapsed().as_secs_f64(),
        out.display()
    );
    Ok(())
}

/// Results-table layout: a proportions header row, then one error row per
/// method.
fn table_text(rows: &[SweepRow], props: &[f64]) -> String {
    let mut s = format!("{:<20}", "Data Proportion");
    for q in props {
        let _ = write!(s, " {:>8}", q);
    }
    s.push('\n');
    for row in rows {
        let _ = write!(s, "{:<20}", row.label);
        for e in &row.report.errors {
            let _ = write!(s, " {:>8.3}", e);
        }
        let _ = writeln!(s, "  mean {:.3}", row.mean);
    }
    s
}

/// Every sorted per-scene error against its cumulative proportion `i / N`.
fn cumulative_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("method,proportion,error_px\n");
    for row in rows {
        let mut sorted = row.errors.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        for (i, e) in sorted.iter().enumerate() {
            let _ = writeln!(s, "{},{},{}", row.label, (i + 1) as f64 / n as f64, e);
        }
    }
    s
}
