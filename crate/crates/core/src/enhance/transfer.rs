//! Gray-level transfer functions and the sub-histogram partitions that
//! generate them.
//!
//! Every equalization variant in this crate reduces to the same scheme: the
//! input gray axis is carved into segments, each segment is assigned an
//! output range, and the pixels of a segment are equalized into that range
//! by its local cumulative distribution. Composing the per-segment mappings
//! yields one 256-entry lookup table that reproduces the method exactly.

use crate::imgcore::{GrayImage, Histogram, LEVELS};

use super::ops::OpCount;

/// Rounds a non-negative value half-up, e.g. `127.5 -> 128`.
#[inline]
pub(crate) fn round_half_up(x: f64) -> f64 {
    (x + 0.5).floor()
}

/// A complete 256-entry gray-level mapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferFunction {
    mapping: [u8; LEVELS],
}

impl TransferFunction {
    /// The identity mapping.
    #[must_use]
    pub fn identity() -> Self {
        let mut mapping = [0u8; LEVELS];
        for (k, m) in mapping.iter_mut().enumerate() {
            *m = k as u8;
        }
        Self { mapping }
    }

    #[must_use]
    pub fn from_mapping(mapping: [u8; LEVELS]) -> Self {
        Self { mapping }
    }

    #[must_use]
    pub fn mapping(&self) -> &[u8; LEVELS] {
        &self.mapping
    }

    /// Output value for input gray level `k`.
    #[must_use]
    pub fn get(&self, k: u8) -> u8 {
        self.mapping[k as usize]
    }

    /// True when the mapping never decreases with the input level.
    #[must_use]
    pub fn is_monotone(&self) -> bool {
        self.mapping.windows(2).all(|w| w[0] <= w[1])
    }

    /// Applies the mapping pixel-wise; dimensions are preserved.
    #[must_use]
    pub fn apply(&self, img: &GrayImage) -> GrayImage {
        img.map(|p| self.mapping[p as usize])
    }
}

/// One segment of a sub-histogram partition.
///
/// `in_lo..=in_hi` is the segment's input gray range, trimmed to its first
/// and last occupied levels; `out_lo..=out_hi` is the output range its
/// pixels are equalized into; `population` is the number of pixels whose
/// value falls in the input range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub in_lo: u8,
    pub in_hi: u8,
    pub out_lo: u8,
    pub out_hi: u8,
    pub population: u64,
}

/// An ordered list of disjoint segments covering the occupied gray levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubHistogramPartition {
    segments: Vec<Segment>,
}

impl SubHistogramPartition {
    pub(crate) fn new(segments: Vec<Segment>) -> Self {
        debug_assert!(!segments.is_empty(), "partition must have a segment");
        debug_assert!(
            segments
                .windows(2)
                .all(|w| w[0].in_hi < w[1].in_lo && w[0].out_hi < w[1].out_lo),
            "segments must be sorted and disjoint"
        );
        Self { segments }
    }

    #[must_use]
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// The segment whose input range contains `level`, if any.
    #[must_use]
    pub fn segment_of(&self, level: u8) -> Option<&Segment> {
        self.segments
            .iter()
            .find(|s| s.in_lo <= level && level <= s.in_hi)
    }
}

/// Composes the per-segment equalization mappings into one transfer
/// function.
///
/// Within a segment, level `k` maps to
/// `out_lo + round((out_hi - out_lo) * cdf_seg(k))` where `cdf_seg` is the
/// cumulative distribution of the segment's own histogram slice. Levels
/// outside every segment carry no pixels; they are filled with the nearest
/// preceding segment value (or the first segment's `out_lo` below the first
/// segment) to keep the composite monotone.
///
/// Counted work per segment of `S` input levels: `S - 1` additions for the
/// running prefix sum and `S` multiplications for the scaled CDF products.
pub(crate) fn compose(
    hist: &Histogram,
    partition: &SubHistogramPartition,
    ops: &mut OpCount,
) -> TransferFunction {
    let segments = partition.segments();
    let mut mapping = [0u8; LEVELS];
    let mut prev = segments[0].out_lo;
    let mut k = 0usize;
    for seg in segments {
        while k < seg.in_lo as usize {
            mapping[k] = prev;
            k += 1;
        }
        let span = f64::from(seg.out_hi - seg.out_lo);
        let pop = seg.population as f64;
        debug_assert!(seg.population > 0, "segment population must be nonzero");
        let mut cum = 0u64;
        for level in seg.in_lo..=seg.in_hi {
            if level == seg.in_lo {
                cum = hist.count(level);
            } else {
                cum += hist.count(level);
                ops.additions += 1;
            }
            debug_assert!(cum <= seg.population);
            let scaled = round_half_up(span * (cum as f64 / pop));
            ops.multiplications += 1;
            prev = seg.out_lo + scaled.min(span) as u8;
            mapping[level as usize] = prev;
            k += 1;
        }
    }
    while k < LEVELS {
        mapping[k] = prev;
        k += 1;
    }
    TransferFunction { mapping }
}

/// Result of a count-weighted scan over part of a histogram.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ScanStats {
    pub population: u64,
    pub weighted_sum: u64,
}

impl ScanStats {
    /// `floor` of the mean gray level, computed exactly in integer
    /// arithmetic (`weighted_sum / population`).
    pub(crate) fn mean_floor(&self) -> u8 {
        (self.weighted_sum / self.population) as u8
    }
}

/// Scans `lo..=hi`, accumulating the population and count-weighted level
/// sum over the occupied sub-range. Returns `None` when the range holds no
/// pixels.
///
/// Counted work for a scan spanning `L` levels: `L` multiplications
/// (`level * count` terms) and `2 * (L - 1)` additions (two running sums).
pub(crate) fn weighted_scan(
    hist: &Histogram,
    lo: u8,
    hi: u8,
    ops: &mut OpCount,
) -> Option<ScanStats> {
    let (first, last) = hist.occupied_bounds(lo, hi)?;
    let mut population = 0u64;
    let mut weighted_sum = 0u64;
    for level in first..=last {
        let c = hist.count(level);
        if level == first {
            population = c;
            weighted_sum = u64::from(level) * c;
            ops.multiplications += 1;
        } else {
            population += c;
            weighted_sum += u64::from(level) * c;
            ops.additions += 2;
            ops.multiplications += 1;
        }
    }
    Some(ScanStats {
        population,
        weighted_sum,
    })
}
