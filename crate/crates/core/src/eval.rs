//! Closest-point RMS between contours, cumulative quantile reports and the
//! per-landmark heatmap baseline.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{nearest_point_on_polyline, Point2, Polyline};
use crate::grid::ScalarGrid;
use crate::walker::localize_peak;

/// Data proportions reported by default.
pub const DEFAULT_PROPORTIONS: [f64; 6] = [0.1, 0.3, 0.5, 0.7, 0.9, 0.95];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RmsDirection {
    /// Ground-truth landmarks against the predicted polyline.
    #[default]
    GtToPred,
    /// Predicted vertices against the ground-truth polyline.
    PredToGt,
    /// Both residual sets pooled.
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Uvf,
    Baseline,
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourError {
    pub rms: f64,
    pub sample_id: String,
    pub method: Method,
}

impl ContourError {
    pub fn new(sample_id: impl Into<String>, method: Method, rms: f64) -> Result<Self> {
        if !(rms >= 0.0 && rms.is_finite()) {
            return Err(Error::invalid(format!(
                "rms must be finite and non-negative, got {rms}"
            )));
        }
        Ok(Self {
            rms,
            sample_id: sample_id.into(),
            method,
        })
    }
}

fn residuals<'a>(points: &'a [Point2], against: &'a Polyline) -> impl Iterator<Item = f64> + 'a {
    points
        .iter()
        .map(move |&p| nearest_point_on_polyline(against, p).distance)
}

/// Root-mean-square of point-to-polyline distances in the chosen direction.
pub fn rms_closest_point(pred: &Polyline, gt: &Polyline, direction: RmsDirection) -> f64 {
    let mut sum_sq = 0.0;
    let mut n = 0usize;
    let mut add = |d: f64| {
        sum_sq += d * d;
        n += 1;
    };
    if matches!(direction, RmsDirection::GtToPred | RmsDirection::Symmetric) {
        residuals(gt.vertices(), pred).for_each(&mut add);
    }
    if matches!(direction, RmsDirection::PredToGt | RmsDirection::Symmetric) {
        residuals(pred.vertices(), gt).for_each(&mut add);
    }
    (sum_sq / n as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileReport {
    pub proportions: Vec<f64>,
    pub errors: Vec<f64>,
}

impl QuantileReport {
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.proportions
            .iter()
            .copied()
            .zip(self.errors.iter().copied())
    }
}

/// Lower empirical quantile: smallest error `e` with at least `ceil(q N)`
/// samples at or below it.
pub fn quantile_report(errors: &[ContourError], proportions: &[f64]) -> Result<QuantileReport> {
    let values: Vec<f64> = errors.iter().map(|e| e.rms).collect();
    quantiles_of(&values, proportions)
}

pub(crate) fn quantiles_of(values: &[f64], proportions: &[f64]) -> Result<QuantileReport> {
    if values.is_empty() {
        return Err(Error::invalid("quantile report needs at least one error"));
    }
    if let Some(q) = proportions.iter().find(|q| !(**q > 0.0 && **q <= 1.0)) {
        return Err(Error::invalid(format!("proportion {q} outside (0, 1]")));
    }
    if proportions.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("proportions must be non-decreasing"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let errors = proportions
        .iter()
        .map(|&q| sorted[order_statistic_rank(q, n) - 1])
        .collect();
    Ok(QuantileReport {
        proportions: proportions.to_vec(),
        errors,
    })
}

/// `ceil(q n)` in 1..=n, ignoring float noise such as `0.3 * 10 = 3.0000000000000004`.
fn order_statistic_rank(q: f64, n: usize) -> usize {
    let raw = q * n as f64;
    let rounded = raw.round();
    let rank = if (raw - rounded).abs() < 1e-9 * n as f64 {
        rounded
    } else {
        raw.ceil()
    };
    (rank as usize).clamp(1, n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodComparison {
    pub a: QuantileReport,
    pub b: QuantileReport,
    /// `a - b` per proportion.
    pub differences: Vec<f64>,
}

pub fn compare_methods(
    a_errors: &[ContourError],
    b_errors: &[ContourError],
    proportions: &[f64],
) -> Result<MethodComparison> {
    compare_reports(
        quantile_report(a_errors, proportions)?,
        quantile_report(b_errors, proportions)?,
    )
}

/// Differences between two reports already computed over the same proportions.
pub fn compare_reports(a: QuantileReport, b: QuantileReport) -> Result<MethodComparison> {
    if a.proportions != b.proportions || a.errors.len() != b.errors.len() {
        return Err(Error::invalid("reports cover different proportions"));
    }
    let differences = a.errors.iter().zip(&b.errors).map(|(x, y)| x - y).collect();
    Ok(MethodComparison { a, b, differences })
}

/// One refined peak per heatmap, in channel order, joined into an open
/// polyline. Consecutive identical peaks are merged.
pub fn extract_baseline_landmarks(heatmaps: &[ScalarGrid]) -> Result<Polyline> {
    if heatmaps.len() < 2 {
        return Err(Error::invalid(
            "baseline extraction needs at least 2 heatmaps",
        ));
    }
    let dims = heatmaps[0].dims();
    if let Some(i) = heatmaps.iter().position(|h| h.dims() != dims) {
        return Err(Error::invalid(format!(
            "heatmap {i} has different dimensions"
        )));
    }
    let mut points: Vec<Point2> = Vec::with_capacity(heatmaps.len());
    for (i, hm) in heatmaps.iter().enumerate() {
        let p = localize_peak(hm).map_err(|_| Error::NoPeak { ordinal: Some(i) })?;
        if points.last().is_some_and(|q| q.distance(p) <= 1e-9) {
            continue;
        }
        points.push(p);
    }
    if points.len() < 2 {
        return Err(Error::invalid(
            "baseline landmarks collapse to fewer than 2 distinct points",
        ));
    }
    Polyline::open(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::Heatmap;

    fn errs(v: &[f64]) -> Vec<ContourError> {
        v.iter()
            .enumerate()
            .map(|(i, &r)| ContourError::new(format!("s{i}"), Method::Uvf, r).unwrap())
            .collect()
    }

    fn line(y: f64) -> Polyline {
        Polyline::open(vec![Point2::new(0.0, y), Point2::new(10.0, y)]).unwrap()
    }

    #[test]
    fn rms_identity_and_offset() {
        let gt = line(0.0);
        for dir in [
            RmsDirection::GtToPred,
            RmsDirection::PredToGt,
            RmsDirection::Symmetric,
        ] {
            assert_eq!(rms_closest_point(&gt, &gt, dir), 0.0);
            assert!((rms_closest_point(&line(1.5), &gt, dir) - 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn rms_directions_differ_for_partial_overlap() {
        let gt = Polyline::open(vec![Point2::new(0.0, 0.0), Point2::new(10.0, 0.0)]).unwrap();
        let pred = Polyline::open(vec![Point2::new(0.0, 0.0), Point2::new(4.0, 0.0)]).unwrap();
        assert_eq!(rms_closest_point(&pred, &gt, RmsDirection::PredToGt), 0.0);
        // Landmarks (0,0) and (10,0): residuals 0 and 6.
        assert!(
            (rms_closest_point(&pred, &gt, RmsDirection::GtToPred) - 18f64.sqrt()).abs() < 1e-12
        );
        // Pooled: residuals 0, 6, 0, 0.
        assert!((rms_closest_point(&pred, &gt, RmsDirection::Symmetric) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn order_statistics() {
        let e = errs(&[3.0, 1.0, 2.0, 10.0, 4.0, 9.0, 5.0, 8.0, 6.0, 7.0]);
        let r = quantile_report(&e, &[0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 1.0]).unwrap();
        assert_eq!(r.errors, vec![1.0, 3.0, 5.0, 7.0, 9.0, 10.0, 10.0]);
        let single = quantile_report(&errs(&[2.5]), &DEFAULT_PROPORTIONS).unwrap();
        assert!(single.errors.iter().all(|&x| x == 2.5));
        assert_eq!(single.proportions, DEFAULT_PROPORTIONS.to_vec());
    }

    #[test]
    fn quantile_errors() {
        assert!(quantile_report(&[], &DEFAULT_PROPORTIONS).is_err());
        assert!(quantile_report(&errs(&[1.0]), &[0.0]).is_err());
        assert!(quantile_report(&errs(&[1.0]), &[0.5, 0.1]).is_err());
        assert!(ContourError::new("x", Method::Uvf, f64::NAN).is_err());
    }

    #[test]
    fn identical_methods_have_zero_difference() {
        let e = errs(&[0.3, 1.2, 0.7, 2.2]);
        let c = compare_methods(&e, &e, &DEFAULT_PROPORTIONS).unwrap();
        assert!(c.differences.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn baseline_keeps_channel_order() {
        let centers = [
            Point2::new(30.0, 10.0),
            Point2::new(5.0, 25.0),
            Point2::new(18.0, 3.0),
        ];
        let hms: Vec<ScalarGrid> = centers
            .iter()
            .map(|&c| Heatmap::gaussian(c, 3.0, 40, 40).unwrap().into_grid())
            .collect();
        let poly = extract_baseline_landmarks(&hms).unwrap();
        for (got, want) in poly.vertices().iter().zip(&centers) {
            assert!(got.distance(*want) < 1e-3);
        }
    }

    #[test]
    fn baseline_duplicate_peaks_collapse() {
        let hm = Heatmap::gaussian(Point2::new(10.0, 10.0), 3.0, 20, 20)
            .unwrap()
            .into_grid();
        let err = extract_baseline_landmarks(&[hm.clone(), hm]).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn baseline_flat_heatmap_names_ordinal() {
        let hm = Heatmap::gaussian(Point2::new(10.0, 10.0), 3.0, 20, 20)
            .unwrap()
            .into_grid();
        let flat = ScalarGrid::new(20, 20, vec![0.0; 400]).unwrap();
        let err = extract_baseline_landmarks(&[hm, flat]).unwrap_err();
        assert!(matches!(err, Error::NoPeak { ordinal: Some(1) }));
    }
}
