//! Grayscale MRI analysis pipeline: contrast enhancement, gray-level
//! clustering, region-of-interest extraction, feature measurement, and a
//! linear SVM grader.
//!
//! The crate is organized around the stages of the pipeline:
//!
//! * [`imgcore`] — 8-bit grayscale images, histograms, and PGM/PNG I/O.
//! * [`enhance`] — histogram equalization variants (`he`, `bbhe`, `rmshe`,
//!   `dhe`) behind the [`enhance::Equalizer`] trait, selectable by name
//!   through [`enhance::EqualizerRegistry`].
//! * [`quality`] — MSE / PSNR / AMBE metrics and arithmetic operation counts
//!   for comparing enhancement methods.
//! * [`segment`] — histogram-weighted K-means over gray levels, ROI masks,
//!   connected components, and boundary outlining.
//! * [`features`] — shape, first-order intensity, and co-occurrence texture
//!   features of a masked region.
//! * [`classify`] — z-score standardization, a deterministic SMO solver for
//!   a linear soft-margin SVM, and a versioned model file format.
//!
//! All algorithms are deterministic: given the same inputs and parameters
//! they produce bit-identical outputs, which the test suite leans on heavily.

pub mod classify;
pub mod enhance;
pub mod features;
pub mod imgcore;
pub mod quality;
pub mod segment;

pub use imgcore::{GrayImage, Histogram};
