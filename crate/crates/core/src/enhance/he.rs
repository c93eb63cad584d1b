//! Plain global histogram equalization.

use crate::imgcore::Histogram;

use super::ops::OpCount;
use super::transfer::{Segment, SubHistogramPartition};
use super::{EnhanceError, Equalizer};

/// Global histogram equalization: the whole gray axis is one segment mapped
/// onto `[0, 255]`, so level `k` goes to `round(255 * cdf(k))`.
///
/// Maximizes contrast with no regard for brightness: a constant image maps
/// to 255 everywhere, and narrow histograms are stretched across the full
/// range.
#[derive(Debug, Default, Clone, Copy)]
pub struct GlobalHistEq;

impl Equalizer for GlobalHistEq {
    fn name(&self) -> &str {
        "he"
    }

    fn plan(
        &self,
        hist: &Histogram,
        _ops: &mut OpCount,
    ) -> Result<SubHistogramPartition, EnhanceError> {
        let (first, last) = hist
            .occupied_bounds(0, 255)
            .ok_or(EnhanceError::EmptyHistogram)?;
        Ok(SubHistogramPartition::new(vec![Segment {
            in_lo: first,
            in_hi: last,
            out_lo: 0,
            out_hi: 255,
            population: hist.total(),
        }]))
    }
}
