use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde_json::{json, Value};
use uvf_core::{
    compare_methods, quantile_report, rms_closest_point, ContourError, LandmarkDocument, Method,
    Polyline, QuantileReport, RmsDirection, DEFAULT_PROPORTIONS,
};

use crate::common::{load_doc, save_text, DirectionArg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Predicted contour documents (repeatable, paired with --gt in order).
    #[arg(long, required = true)]
    pred: Vec<PathBuf>,
    /// Ground-truth landmark documents.
    #[arg(long, required = true)]
    gt: Vec<PathBuf>,
    /// Baseline predictions to compare against, paired like --pred.
    #[arg(long)]
    baseline: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = DirectionArg::Gt2pred)]
    direction: DirectionArg,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_PROPORTIONS.to_vec())]
    proportions: Vec<f64>,
    /// Millimetres per pixel; adds millimetre errors to JSON output.
    #[arg(long)]
    pixel_spacing: Option<f64>,
    /// Report path.
    #[arg(long)]
    out: PathBuf,
    /// Report format; inferred from the output extension when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

pub fn run(args: Args) -> Result<()> {
    if args.pred.len() != args.gt.len() {
        bail!(
            "{} --pred files but {} --gt files",
            args.pred.len(),
            args.gt.len()
        );
    }
    if !args.baseline.is_empty() && args.baseline.len() != args.gt.len() {
        bail!(
            "{} --baseline files but {} --gt files",
            args.baseline.len(),
            args.gt.len()
        );
    }
    if let Some(s) = args.pixel_spacing {
        if !(s > 0.0 && s.is_finite()) {
            bail!("--pixel-spacing must be positive, got {s}");
        }
    }
    let format = match args.format {
        Some(f) => f,
        None => match args.out.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => FormatArg::Json,
            _ => FormatArg::Csv,
        },
    };
    let direction: RmsDirection = args.direction.into();

    let uvf = score_all(&args.pred, &args.gt, Method::Uvf, direction)?;
    let uvf_report = quantile_report(&uvf, &args.proportions)?;
    let baseline = if args.baseline.is_empty() {
        None
    } else {
        let errs = score_all(&args.baseline, &args.gt, Method::Baseline, direction)?;
        let report = quantile_report(&errs, &args.proportions)?;
        Some((errs, report))
    };

    let text = match format {
        FormatArg::Csv => {
            let mut rows = vec![("uvf", &uvf_report)];
            if let Some((_, r)) = &baseline {
                rows.push(("baseline", r));
            }
            report_csv(&rows, baseline.is_some())
        }
        FormatArg::Json => {
            let method = |name: &str, errs: &[ContourError], r: &QuantileReport| {
                let mut v = json!({
                    "method": name,
                    "proportions": r.proportions,
                    "error_px": r.errors,
                    "contours": errs,
                });
                if let Some(s) = args.pixel_spacing {
                    v["error_mm"] = json!(r.errors.iter().map(|e| e * s).collect::<Vec<_>>());
                }
                v
            };
            let mut methods = vec![method("uvf", &uvf, &uvf_report)];
            let mut doc = json!({ "direction": direction });
            if let Some((errs, r)) = &baseline {
                methods.push(method("baseline", errs, r));
                let cmp = compare_methods(errs, &uvf, &args.proportions)?;
                doc["baseline_minus_uvf"] = json!(cmp.differences);
            }
            doc["methods"] = Value::Array(methods);
            if let Some(s) = args.pixel_spacing {
                doc["pixel_spacing_mm"] = json!(s);
            }
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            s
        }
    };
    save_text(&args.out, &text)
}

/// `proportion,error_px[,method]` rows.
pub fn report_csv(rows: &[(&str, &QuantileReport)], with_method: bool) -> String {
    let mut out = String::from(if with_method {
        "proportion,error_px,method\n"
    } else {
        "proportion,error_px\n"
    });
    for (name, report) in rows {
        for (q, e) in report.rows() {
            if with_method {
                let _ = writeln!(out, "{q},{e},{name}");
            } else {
                let _ = writeln!(out, "{q},{e}");
            }
        }
    }
    out
}

fn score_all(
    preds: &[PathBuf],
    gts: &[PathBuf],
    method: Method,
    direction: RmsDirection,
) -> Result<Vec<ContourError>> {
    let mut out = Vec::new();
    for (p, g) in preds.iter().zip(gts) {
        let pred = load_doc(p)?;
        let gt = load_doc(g)?;
        for (label, pp, gp) in pair_contours(p, &pred, &gt)? {
            let rms = rms_closest_point(&pp, &gp, direction);
            let id = format!("{}#{label}", g.display());
            out.push(
                ContourError::new(id, method, rms)
                    .with_context(|| format!("scoring {}", p.display()))?,
            );
        }
    }
    Ok(out)
}

/// Pairs contours by side label when every contour in both documents has
/// a distinct one, otherwise by position.
fn pair_contours(
    pred_path: &Path,
    pred: &LandmarkDocument,
    gt: &LandmarkDocument,
) -> Result<Vec<(String, Polyline, Polyline)>> {
    let sides = |d: &LandmarkDocument| -> Option<Vec<String>> {
        let s: Option<Vec<String>> = d.contours.iter().map(|c| c.side.clone()).collect();
        let s = s?;
        let mut sorted = s.clone();
        sorted.sort();
        sorted.dedup();
        (sorted.len() == s.len()).then_some(s)
    };
    let pred_polys = pred.polylines()?;
    let gt_polys = gt.polylines()?;
    if let (Some(ps), Some(gs)) = (sides(pred), sides(gt)) {
        return gs
            .iter()
            .zip(gt_polys)
            .map(|(side, gp)| {
                let i = ps.iter().position(|s| s == side).with_context(|| {
                    format!("{} has no contour with side {side:?}", pred_path.display())
                })?;
                Ok((side.clone(), pred_polys[i].clone(), gp))
            })
            .collect();
    }
    if pred_polys.len() != gt_polys.len() {
        bail!(
            "{} has {} contours, ground truth has {}",
            pred_path.display(),
            pred_polys.len(),
            gt_polys.len()
        );
    }
    Ok(pred_polys
        .into_iter()
        .zip(gt_polys)
        .enumerate()
        .map(|(i, (p, g))| (i.to_string(), p, g))
        .collect())
}
