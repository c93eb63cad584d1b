//! Dynamic histogram equalization.

use crate::imgcore::{Histogram, LEVELS};

use super::ops::OpCount;
use super::transfer::{weighted_scan, Segment, SubHistogramPartition};
use super::{EnhanceError, Equalizer};

/// Dynamic histogram equalization.
///
/// The histogram is smoothed with a three-tap mean filter (zero-padded at
/// the ends) and cut at the local minima of the smoothed curve, so each
/// portion of pixel mass becomes its own partition. A partition *dominates*
/// when its population exceeds `spread_factor * total / partition_count`;
/// dominating partitions are re-split at the floor of their internal mean
/// until none dominates or their occupied width has shrunk to
/// `min_partition_width` levels. Finally the 256 output levels are divided
/// among the partitions in proportion to the gray-level span each one
/// occupies in the input (each receiving at least one level), and every
/// partition is equalized into its own slice.
///
/// Degenerate rule: when every partition holds a single gray level there is
/// no span to apportion, and each level simply maps to itself — a constant
/// image passes through unchanged.
///
/// `population_weighted` switches the range allocation weights from the
/// occupied span to the partition population; it is off by default and the
/// degenerate rule above still applies.
#[derive(Debug, Clone, Copy)]
pub struct DynamicHistEq {
    spread_factor: f64,
    min_partition_width: u8,
    population_weighted: bool,
}

impl DynamicHistEq {
    /// Fails when `spread_factor` is not a positive finite number or
    /// `min_partition_width` is zero.
    pub fn new(
        spread_factor: f64,
        min_partition_width: u8,
        population_weighted: bool,
    ) -> Result<Self, EnhanceError> {
        if !spread_factor.is_finite() || spread_factor <= 0.0 {
            return Err(EnhanceError::InvalidSpreadFactor(spread_factor));
        }
        if min_partition_width == 0 {
            return Err(EnhanceError::InvalidPartitionWidth(min_partition_width));
        }
        Ok(Self {
            spread_factor,
            min_partition_width,
            population_weighted,
        })
    }

    #[must_use]
    pub fn spread_factor(&self) -> f64 {
        self.spread_factor
    }

    #[must_use]
    pub fn min_partition_width(&self) -> u8 {
        self.min_partition_width
    }
}

/// A partition under construction: its cell on the gray axis, the occupied
/// sub-range, and the pixel population.
#[derive(Debug, Clone, Copy)]
struct Partition {
    cell_lo: u8,
    cell_hi: u8,
    first: u8,
    last: u8,
    population: u64,
}

impl Partition {
    fn from_cell(hist: &Histogram, cell_lo: u8, cell_hi: u8) -> Option<Self> {
        let (first, last) = hist.occupied_bounds(cell_lo, cell_hi)?;
        let population = (first..=last).map(|k| hist.count(k)).sum();
        Some(Self {
            cell_lo,
            cell_hi,
            first,
            last,
            population,
        })
    }

    /// Occupied gray-level span; a single-level partition has span 0.
    fn span(&self) -> u64 {
        u64::from(self.last - self.first)
    }

    /// Number of occupied-range levels, used against `min_partition_width`.
    fn width(&self) -> u32 {
        u32::from(self.last - self.first) + 1
    }
}

impl Equalizer for DynamicHistEq {
    fn name(&self) -> &str {
        "dhe"
    }

    fn plan(
        &self,
        hist: &Histogram,
        ops: &mut OpCount,
    ) -> Result<SubHistogramPartition, EnhanceError> {
        if hist.is_empty() {
            return Err(EnhanceError::EmptyHistogram);
        }

        // 1. Three-tap mean smoothing, zero-padded beyond the gray axis.
        let mut smoothed = [0.0f64; LEVELS];
        for k in 0..LEVELS {
            let left = if k > 0 { hist.counts()[k - 1] } else { 0 };
            let right = if k + 1 < LEVELS {
                hist.counts()[k + 1]
            } else {
                0
            };
            let sum = left + hist.counts()[k] + right;
            ops.additions += 2;
            smoothed[k] = sum as f64 / 3.0;
            ops.multiplications += 1;
        }

        // 2. Cut at local minima of the smoothed histogram. A plateau
        // valley is cut once, at its first index: the entry must strictly
        // descend from the left and not rise to the right.
        let mut cells: Vec<(u8, u8)> = Vec::new();
        let mut lo = 0u8;
        for k in 1..LEVELS - 1 {
            if smoothed[k] < smoothed[k - 1] && smoothed[k] <= smoothed[k + 1] {
                cells.push((lo, (k - 1) as u8));
                lo = k as u8;
            }
        }
        cells.push((lo, 255));

        let mut partitions: Vec<Partition> = cells
            .iter()
            .filter_map(|&(lo, hi)| Partition::from_cell(hist, lo, hi))
            .collect();

        // 3. Re-split dominating partitions at their internal mean. Each
        // split raises the partition count and thereby lowers the
        // domination threshold, so the loop always terminates.
        loop {
            let threshold =
                self.spread_factor * (hist.total() as f64 / partitions.len() as f64);
            ops.multiplications += 2;
            let target = partitions.iter().position(|p| {
                p.population as f64 > threshold && p.width() > u32::from(self.min_partition_width)
            });
            let Some(idx) = target else { break };
            let p = partitions[idx];
            let stats = weighted_scan(hist, p.cell_lo, p.cell_hi, ops)
                .expect("dominating partition holds pixels");
            let xm = stats.mean_floor();
            debug_assert!(p.first <= xm && xm < p.last, "split must make progress");
            let lower = Partition::from_cell(hist, p.cell_lo, xm)
                .expect("lower half holds the first occupied level");
            let upper = Partition::from_cell(hist, xm + 1, p.cell_hi)
                .expect("upper half holds the last occupied level");
            partitions.splice(idx..=idx, [lower, upper]);
        }

        // 4. Apportion the 256 output levels. Weights are occupied spans
        // (or populations when flagged); if every span is zero there is
        // nothing to stretch and each partition keeps its own levels.
        let spans_total: u64 = partitions.iter().map(Partition::span).sum();
        if spans_total == 0 {
            let segments = partitions
                .iter()
                .map(|p| Segment {
                    in_lo: p.first,
                    in_hi: p.last,
                    out_lo: p.first,
                    out_hi: p.last,
                    population: p.population,
                })
                .collect();
            return Ok(SubHistogramPartition::new(segments));
        }

        let weights: Vec<u64> = partitions
            .iter()
            .map(|p| {
                if self.population_weighted {
                    p.population
                } else {
                    p.span()
                }
            })
            .collect();
        let total_weight: u64 = weights.iter().sum();
        let sizes = apportion(&weights, total_weight, partitions.len(), ops);

        let mut segments = Vec::with_capacity(partitions.len());
        let mut start = 0u32;
        for (p, size) in partitions.iter().zip(&sizes) {
            segments.push(Segment {
                in_lo: p.first,
                in_hi: p.last,
                out_lo: start as u8,
                out_hi: (start + size - 1) as u8,
                population: p.population,
            });
            start += size;
        }
        debug_assert_eq!(start, 256);
        Ok(SubHistogramPartition::new(segments))
    }
}

/// Splits the 256 output levels among `count` partitions proportionally to
/// `weights`, guaranteeing at least one level each. Rounding residue goes
/// to the largest fractional remainders (ties to the lower index).
fn apportion(weights: &[u64], total_weight: u64, count: usize, ops: &mut OpCount) -> Vec<u32> {
    let spare = (LEVELS - count) as f64;
    let mut sizes = Vec::with_capacity(count);
    let mut fractions = Vec::with_capacity(count);
    let mut assigned = 0u32;
    for &w in weights {
        let share = spare * (w as f64 / total_weight as f64);
        ops.multiplications += 2;
        let whole = share.floor() as u32;
        sizes.push(1 + whole);
        fractions.push(share - whole as f64);
        assigned += 1 + whole;
    }
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by(|&a, &b| {
        fractions[b]
            .partial_cmp(&fractions[a])
            .expect("fractions are finite")
            .then(a.cmp(&b))
    });
    let mut remaining = LEVELS as u32 - assigned;
    for &i in &order {
        if remaining == 0 {
            break;
        }
        sizes[i] += 1;
        remaining -= 1;
    }
    sizes
}
