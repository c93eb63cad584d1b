//! Region-of-interest masks and their extraction from a clustering.

use super::{LabelMap, SegmentError};
use crate::imgcore::GrayImage;

/// How to pick the cluster containing the region of interest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoiStrategy {
    /// The cluster with the largest centroid. Tumors are hyperintense on
    /// the contrast-enhanced scans this pipeline targets, so the automatic
    /// default goes for the brightest cluster.
    BrightestCentroid,
    /// An explicitly chosen cluster index, for manual identification.
    ClusterIndex(usize),
}

/// A binary pixel mask, row-major, same shape as its source image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoiMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
    source_cluster: Option<usize>,
}

impl RoiMask {
    /// Builds a mask from raw bits; `bits.len()` must equal
    /// `width * height`.
    pub fn new(width: usize, height: usize, bits: Vec<bool>, source_cluster: Option<usize>) -> Self {
        assert_eq!(bits.len(), width * height, "mask bits must cover every pixel");
        Self {
            width,
            height,
            bits,
            source_cluster,
        }
    }

    /// Reads a mask from a grayscale rendering: any nonzero pixel is set.
    pub fn from_image(img: &GrayImage) -> Self {
        Self {
            width: img.width(),
            height: img.height(),
            bits: img.pixels().iter().map(|&p| p != 0).collect(),
            source_cluster: None,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Row-major mask bits.
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Whether the pixel at `(x, y)` belongs to the region.
    pub fn get(&self, x: usize, y: usize) -> bool {
        assert!(x < self.width && y < self.height, "mask coordinates out of bounds");
        self.bits[y * self.width + x]
    }

    /// Index of the cluster the mask was extracted from, if any.
    pub fn source_cluster(&self) -> Option<usize> {
        self.source_cluster
    }

    /// Number of set pixels.
    pub fn count_set(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// True when no pixel is set.
    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Renders the mask as a grayscale image with set pixels at 255, the
    /// form it is saved in so any viewer can display it.
    pub fn to_image(&self) -> GrayImage {
        let pixels = self.bits.iter().map(|&b| if b { 255 } else { 0 }).collect();
        GrayImage::new(self.width, self.height, pixels)
            .expect("mask dimensions are valid by construction")
    }
}

/// Selects one cluster of `lm` as the region of interest.
///
/// Bits are set exactly where the label map matches the chosen cluster.
/// With a single cluster any strategy yields the full-image mask.
pub fn extract_roi(lm: &LabelMap, strategy: RoiStrategy) -> Result<RoiMask, SegmentError> {
    let chosen = match strategy {
        // Centroids are sorted ascending, so the brightest is the last.
        RoiStrategy::BrightestCentroid => lm.k() - 1,
        RoiStrategy::ClusterIndex(i) => {
            if i >= lm.k() {
                return Err(SegmentError::ClusterIndexOutOfRange { index: i, k: lm.k() });
            }
            i
        }
    };
    let bits = lm.labels().iter().map(|&l| usize::from(l) == chosen).collect();
    Ok(RoiMask::new(lm.width(), lm.height(), bits, Some(chosen)))
}

/// Dice overlap `2|A∩B| / (|A| + |B|)` between two same-sized masks, the
/// usual segmentation agreement score. Two empty masks agree perfectly.
pub fn dice(a: &RoiMask, b: &RoiMask) -> Result<f64, SegmentError> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(SegmentError::DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    let inter = a
        .bits()
        .iter()
        .zip(b.bits())
        .filter(|(&x, &y)| x && y)
        .count();
    let total = a.count_set() + b.count_set();
    if total == 0 {
        Ok(1.0)
    } else {
        Ok(2.0 * inter as f64 / total as f64)
    }
}
