//! Per-feature z-score standardization.
//!
//! The raw features span wildly different scales (pixel counts in the
//! thousands next to probabilities below 0.1), which cripples a margin
//! classifier; each column is therefore centered and scaled to unit
//! spread before training and classification.

use crate::features::FEATURE_DIM;

/// Fitted per-column standardization statistics.
///
/// Columns whose spread is indistinguishable from zero carry no
/// information and are dropped: their transform output is 0 regardless of
/// input, which also makes predictions invariant to the (arbitrary) values
/// a constant column happens to hold at classification time.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaler {
    means: [f64; FEATURE_DIM],
    stds: [f64; FEATURE_DIM],
    dropped: [bool; FEATURE_DIM],
}

impl Scaler {
    /// Fits column means and population standard deviations over the rows.
    ///
    /// A column is dropped when its standard deviation is at or below
    /// `1e-12 · max(1, |mean|)` — zero spread up to float noise.
    pub fn fit(rows: &[[f64; FEATURE_DIM]]) -> Self {
        assert!(!rows.is_empty(), "cannot fit a scaler to zero rows");
        let n = rows.len() as f64;
        let mut means = [0.0; FEATURE_DIM];
        let mut stds = [0.0; FEATURE_DIM];
        let mut dropped = [false; FEATURE_DIM];
        for c in 0..FEATURE_DIM {
            let mean = rows.iter().map(|r| r[c]).sum::<f64>() / n;
            let var = rows.iter().map(|r| (r[c] - mean) * (r[c] - mean)).sum::<f64>() / n;
            let std = var.sqrt();
            means[c] = mean;
            stds[c] = std;
            dropped[c] = std <= 1e-12 * mean.abs().max(1.0);
        }
        Self {
            means,
            stds,
            dropped,
        }
    }

    /// Rebuilds a scaler from stored statistics (model deserialization).
    pub(crate) fn from_parts(
        means: [f64; FEATURE_DIM],
        stds: [f64; FEATURE_DIM],
        dropped: [bool; FEATURE_DIM],
    ) -> Self {
        Self {
            means,
            stds,
            dropped,
        }
    }

    /// Standardizes one row: `(x - mean) / std` per retained column, 0 for
    /// dropped columns.
    #[must_use]
    pub fn transform(&self, x: &[f64; FEATURE_DIM]) -> [f64; FEATURE_DIM] {
        let mut out = [0.0; FEATURE_DIM];
        for c in 0..FEATURE_DIM {
            if !self.dropped[c] {
                out[c] = (x[c] - self.means[c]) / self.stds[c];
            }
        }
        out
    }

    pub fn means(&self) -> &[f64; FEATURE_DIM] {
        &self.means
    }

    pub fn stds(&self) -> &[f64; FEATURE_DIM] {
        &self.stds
    }

    pub fn is_dropped(&self, column: usize) -> bool {
        self.dropped[column]
    }

    /// Indices of the dropped (zero-variance) columns, ascending.
    pub fn dropped_columns(&self) -> Vec<usize> {
        (0..FEATURE_DIM).filter(|&c| self.dropped[c]).collect()
    }
}
