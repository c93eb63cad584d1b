//! Brightness-preserving bi-histogram equalization.

use crate::imgcore::Histogram;

use super::ops::OpCount;
use super::rmshe::RecursiveMeanHistEq;
use super::transfer::SubHistogramPartition;
use super::{EnhanceError, Equalizer};

/// Bi-histogram equalization: the histogram is split once at
/// `Xm = floor(mean intensity)`; pixels at or below `Xm` are equalized into
/// `[0, Xm]` and the rest into `[Xm + 1, 255]`, which keeps the output mean
/// close to the input mean.
///
/// This is the one-round special case of [`RecursiveMeanHistEq`] and shares
/// its implementation, so the two are bit-identical by construction.
#[derive(Debug, Default, Clone, Copy)]
pub struct BiHistEq;

impl Equalizer for BiHistEq {
    fn name(&self) -> &str {
        "bbhe"
    }

    fn plan(
        &self,
        hist: &Histogram,
        ops: &mut OpCount,
    ) -> Result<SubHistogramPartition, EnhanceError> {
        RecursiveMeanHistEq::new(1)
            .expect("depth 1 is always valid")
            .plan(hist, ops)
    }
}
