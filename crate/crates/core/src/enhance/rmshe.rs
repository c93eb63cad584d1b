//! Recursive mean-split histogram equalization.

use crate::imgcore::Histogram;

use super::ops::OpCount;
use super::transfer::{weighted_scan, Segment, SubHistogramPartition};
use super::{EnhanceError, Equalizer};

/// Maximum supported recursion depth. The gray axis has 256 levels, so
/// deeper splits only produce degenerate single-level segments.
pub const MAX_RMSHE_DEPTH: u32 = 7;

/// Recursive mean-split equalization.
///
/// The gray axis starts as one cell `[0, 255]`. At each of `depth` rounds,
/// every cell holding pixels is split at `Xm = floor(mean of the pixels in
/// the cell)` into `[lo, Xm]` and `[Xm + 1, hi]` (pixels equal to `Xm` land
/// in the lower half). Every cell then becomes a segment equalized into its
/// own range, which keeps each sub-population inside the brightness band it
/// came from.
///
/// A split is skipped when it cannot make progress: empty cells have no
/// mean, and a cell whose pixels all sit at its upper bound (in particular
/// any cell holding a single gray level at `hi`) would reproduce itself.
/// Degenerate cells therefore stabilize, and a constant image passes
/// through unchanged at any depth.
///
/// `depth == 0` reproduces plain global equalization bit-for-bit, and
/// `depth == 1` is exactly the brightness-preserving bi-histogram method.
#[derive(Debug, Clone, Copy)]
pub struct RecursiveMeanHistEq {
    depth: u32,
}

impl RecursiveMeanHistEq {
    /// Fails with [`EnhanceError::InvalidDepth`] when `depth` exceeds
    /// [`MAX_RMSHE_DEPTH`].
    pub fn new(depth: u32) -> Result<Self, EnhanceError> {
        if depth > MAX_RMSHE_DEPTH {
            return Err(EnhanceError::InvalidDepth(depth));
        }
        Ok(Self { depth })
    }

    #[must_use]
    pub fn depth(&self) -> u32 {
        self.depth
    }
}

impl Equalizer for RecursiveMeanHistEq {
    fn name(&self) -> &str {
        "rmshe"
    }

    fn plan(
        &self,
        hist: &Histogram,
        ops: &mut OpCount,
    ) -> Result<SubHistogramPartition, EnhanceError> {
        if hist.is_empty() {
            return Err(EnhanceError::EmptyHistogram);
        }
        let mut cells: Vec<(u8, u8)> = vec![(0, 255)];
        for _ in 0..self.depth {
            let mut next = Vec::with_capacity(cells.len() * 2);
            for &(lo, hi) in &cells {
                match weighted_scan(hist, lo, hi, ops) {
                    Some(stats) => {
                        let xm = stats.mean_floor();
                        if xm < hi {
                            next.push((lo, xm));
                            next.push((xm + 1, hi));
                        } else {
                            next.push((lo, hi));
                        }
                    }
                    None => next.push((lo, hi)),
                }
            }
            cells = next;
        }
        let segments = cells
            .iter()
            .filter_map(|&(lo, hi)| {
                let (first, last) = hist.occupied_bounds(lo, hi)?;
                let population = (first..=last).map(|k| hist.count(k)).sum();
                Some(Segment {
                    in_lo: first,
                    in_hi: last,
                    out_lo: lo,
                    out_hi: hi,
                    population,
                })
            })
            .collect();
        Ok(SubHistogramPartition::new(segments))
    }
}
