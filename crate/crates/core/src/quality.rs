//! Image quality metrics and arithmetic-operation accounting for comparing
//! enhancement methods.
//!
//! Metrics are computed against the unprocessed original: mean squared
//! error, peak signal-to-noise ratio (with `+inf` as the exact-match
//! sentinel), and the absolute mean brightness error, which quantifies how
//! well the brightness-preserving methods live up to the name.
//!
//! # Operation counting
//!
//! [`OpCount`] instrumentation tallies the arithmetic the equalization
//! algorithms perform on the histogram representation:
//!
//! * histogram build: one addition per pixel (`N`);
//! * per-segment transfer: `S - 1` additions for the prefix sum and `S`
//!   multiplications for the scaled CDF products, where `S` is the
//!   segment's occupied input-level count;
//! * mean scan over `L` levels (the split-point computation of `bbhe`,
//!   `rmshe`, and `dhe` re-splits): `L` multiplications and `2 * (L - 1)`
//!   additions for the two running sums;
//! * `dhe` extras: histogram smoothing (2 additions and 1 multiplication
//!   per bin, so 512 and 256), 2 multiplications per domination check
//!   round, and 2 multiplications per partition for range allocation
//!   (skipped entirely in the degenerate all-single-level case).
//!
//! Divisions, comparisons, rounding, and population bookkeeping are not
//! counted, and applying the final lookup table costs nothing. For plain
//! `he` on an `N`-pixel image whose histogram spans `S` occupied levels the
//! closed form is therefore `additions = N + S - 1`,
//! `multiplications = S` — i.e. `N + 255` and `256` for a full-range image.
//! Every added split makes `bbhe` and deeper `rmshe` strictly costlier, so
//! counts order `he <= bbhe <= rmshe(r >= 2)` on non-degenerate images.

use crate::enhance::{EnhanceError, EnhanceParams, EqualizerRegistry, OpCount, METHOD_NAMES};
use crate::imgcore::{mean_intensity, GrayImage};

/// Errors raised by the pixel-difference metrics.
#[derive(Debug, thiserror::Error)]
pub enum QualityError {
    #[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
}

fn check_dims(a: &GrayImage, b: &GrayImage) -> Result<(), QualityError> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(QualityError::DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    Ok(())
}

/// Mean squared error between two same-sized images.
pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64, QualityError> {
    check_dims(a, b)?;
    let sum: u64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| {
            let d = i64::from(x) - i64::from(y);
            (d * d) as u64
        })
        .sum();
    Ok(sum as f64 / a.pixel_count() as f64)
}

/// Peak signal-to-noise ratio in decibels: `10 * log10(255^2 / mse)`.
///
/// Identical images have zero error; the ratio is `+inf` exactly then.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64, QualityError> {
    let e = mse(a, b)?;
    if e == 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(10.0 * (255.0f64 * 255.0 / e).log10())
    }
}

/// Absolute mean brightness error: `|mean(a) - mean(b)|`.
#[must_use]
pub fn ambe(a: &GrayImage, b: &GrayImage) -> f64 {
    (mean_intensity(a) - mean_intensity(b)).abs()
}

/// Quality metrics of one processed image against its original, along with
/// the operation counts of the run that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub mse: f64,
    pub psnr_db: f64,
    pub ambe: f64,
    pub ops: OpCount,
}

impl QualityReport {
    /// Measures `processed` against `original`, attaching `ops` from the
    /// producing run (use a default count for externally produced images).
    pub fn measure(
        original: &GrayImage,
        processed: &GrayImage,
        ops: OpCount,
    ) -> Result<Self, QualityError> {
        Ok(Self {
            mse: mse(original, processed)?,
            psnr_db: psnr(original, processed)?,
            ambe: ambe(original, processed),
            ops,
        })
    }
}

/// Runs all four equalizers on `img` and reports metrics per method, in
/// canonical order (`he`, `bbhe`, `rmshe`, `dhe`).
pub fn compare_methods(
    img: &GrayImage,
    params: &EnhanceParams,
) -> Result<Vec<(String, QualityReport)>, EnhanceError> {
    let registry = EqualizerRegistry::builtin();
    let mut out = Vec::with_capacity(METHOD_NAMES.len());
    for name in METHOD_NAMES {
        let eq = registry.build(name, params)?;
        let mut ops = OpCount::default();
        let processed = eq.equalize_counted(img, &mut ops)?;
        let report = QualityReport::measure(img, &processed, ops)
            .expect("equalization preserves dimensions");
        out.push((name.to_string(), report));
    }
    Ok(out)
}

/// Operation counts of one instrumented run of the named method.
pub fn op_count_report(
    method: &str,
    img: &GrayImage,
    params: &EnhanceParams,
) -> Result<OpCount, EnhanceError> {
    let eq = EqualizerRegistry::builtin().build(method, params)?;
    let mut ops = OpCount::default();
    eq.equalize_counted(img, &mut ops)?;
    Ok(ops)
}

/// Header of the comparison CSV.
pub const CSV_HEADER: &str = "method,psnr_db,mse,ambe,additions,multiplications";

/// One CSV row. Floats use the shortest representation that parses back to
/// the identical value; an infinite PSNR serializes as the literal `inf`.
#[must_use]
pub fn csv_row(method: &str, report: &QualityReport) -> String {
    format!(
        "{},{},{},{},{},{}",
        method,
        report.psnr_db,
        report.mse,
        report.ambe,
        report.ops.additions,
        report.ops.multiplications
    )
}

/// Serializes a method comparison as CSV, header first.
#[must_use]
pub fn reports_to_csv(reports: &[(String, QualityReport)]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (method, report) in reports {
        out.push_str(&csv_row(method, report));
        out.push('\n');
    }
    out
}
