//! Gray-level segmentation: K-means clustering over the intensity
//! histogram, region-of-interest selection, connected components, and
//! boundary outlining.
//!
//! The intended flow mirrors the tumor-extraction pipeline: cluster the
//! (enhanced) image's gray levels with [`kmeans`], pick the cluster holding
//! the structure of interest with [`extract_roi`] (hyperintense tumors live
//! in the brightest cluster), reduce a possibly fragmented mask to its
//! single biggest blob with [`largest_component`], and draw the result onto
//! the source image with [`outline`].
//!
//! Everything here is deterministic: K-means uses evenly spaced initial
//! centroids by default (a seeded-random option exists for
//! experimentation), and all tie-breaks are resolved toward the lower
//! index.

mod components;
mod kmeans;
mod outline;
mod roi;

pub use components::{largest_component, Connectivity};
pub use kmeans::{kmeans, kmeans_with_init, KmeansInit, LabelMap};
pub use outline::outline;
pub use roi::{dice, extract_roi, RoiMask, RoiStrategy};

/// Errors raised by segmentation operations.
#[derive(Debug, thiserror::Error)]
pub enum SegmentError {
    #[error("cluster count must be at least 1")]
    InvalidK,
    #[error("cluster count {k} exceeds the {distinct} distinct gray levels present")]
    TooManyClusters { k: usize, distinct: usize },
    #[error("iteration budget must be at least 1")]
    InvalidIterations,
    #[error("tolerance must be finite and non-negative, got {0}")]
    InvalidTolerance(f64),
    #[error("cluster index {index} out of range for {k} clusters")]
    ClusterIndexOutOfRange { index: usize, k: usize },
    #[error("mask has no set pixels")]
    EmptyMask,
    #[error("dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
}
