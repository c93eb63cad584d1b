//! The 16-entry feature battery describing a masked region: shape counts,
//! first-order intensity statistics, and co-occurrence texture measures.
//!
//! [`extract_all`] assembles the full [`FeatureVector`]; the individual
//! stages ([`shape_features`], [`intensity_features`], [`compute_glcm`] +
//! [`texture_features`]) are public for piecemeal use. All features depend
//! only on the masked content and pixel adjacency, never on absolute
//! position, so translating a region inside a larger image changes
//! nothing.

mod glcm;
mod intensity;
mod shape;

pub use glcm::{compute_glcm, quantize, texture_features, Glcm, TextureFeatures};
pub use intensity::{intensity_features, intensity_features_with, IntensityFeatures, VarianceMode};
pub use shape::{shape_features, ShapeFeatures};

use crate::imgcore::GrayImage;
use crate::segment::RoiMask;

/// Errors raised during feature extraction.
#[derive(Debug, thiserror::Error)]
pub enum FeatureError {
    #[error("mask has no set pixels")]
    EmptyMask,
    #[error("dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("quantization level count {0} outside 2..=256")]
    InvalidQuantization(usize),
    #[error("co-occurrence offset must not be (0, 0)")]
    InvalidOffset,
    #[error("no pixel pair fits the offset inside the mask")]
    DegenerateGlcm,
}

/// Knobs for [`extract_all`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureParams {
    /// Co-occurrence quantization bins `Q`.
    pub glcm_levels: usize,
    /// Co-occurrence displacement `(dy, dx)`.
    pub glcm_offset: (i32, i32),
    /// Report raw gray-level² variance instead of the normalized default.
    pub raw_variance: bool,
}

impl Default for FeatureParams {
    fn default() -> Self {
        Self {
            glcm_levels: 8,
            glcm_offset: (0, 1),
            raw_variance: false,
        }
    }
}

/// Number of entries in a [`FeatureVector`].
pub const FEATURE_DIM: usize = 16;

/// Feature names in serialization order.
pub const FIELD_NAMES: [&str; FEATURE_DIM] = [
    "white_pixels",
    "area",
    "perimeter",
    "contrast",
    "correlation",
    "energy",
    "homogeneity",
    "mean",
    "standard_deviation",
    "entropy",
    "rms",
    "variance",
    "smoothness",
    "kurtosis",
    "skewness",
    "idm",
];

/// The complete region description, fields in serialization order.
///
/// `entropy` is the first-order intensity entropy; the co-occurrence
/// entropy is available separately through [`texture_features`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    pub white_pixels: u64,
    pub area: u64,
    pub perimeter: f64,
    pub contrast: f64,
    pub correlation: f64,
    pub energy: f64,
    pub homogeneity: f64,
    pub mean: f64,
    pub standard_deviation: f64,
    pub entropy: f64,
    pub rms: f64,
    pub variance: f64,
    pub smoothness: f64,
    pub kurtosis: f64,
    pub skewness: f64,
    pub idm: f64,
}

impl FeatureVector {
    /// Rebuilds a vector from its numeric-array form. The two count
    /// entries are truncated back to integers; for arrays produced by
    /// [`as_array`](Self::as_array) the round-trip is exact.
    #[must_use]
    pub fn from_array(values: [f64; FEATURE_DIM]) -> Self {
        Self {
            white_pixels: values[0] as u64,
            area: values[1] as u64,
            perimeter: values[2],
            contrast: values[3],
            correlation: values[4],
            energy: values[5],
            homogeneity: values[6],
            mean: values[7],
            standard_deviation: values[8],
            entropy: values[9],
            rms: values[10],
            variance: values[11],
            smoothness: values[12],
            kurtosis: values[13],
            skewness: values[14],
            idm: values[15],
        }
    }

    /// The entries as one numeric array, in serialization order.
    #[must_use]
    pub fn as_array(&self) -> [f64; FEATURE_DIM] {
        [
            self.white_pixels as f64,
            self.area as f64,
            self.perimeter,
            self.contrast,
            self.correlation,
            self.energy,
            self.homogeneity,
            self.mean,
            self.standard_deviation,
            self.entropy,
            self.rms,
            self.variance,
            self.smoothness,
            self.kurtosis,
            self.skewness,
            self.idm,
        ]
    }

    /// CSV header matching [`csv_row`](Self::csv_row).
    #[must_use]
    pub fn csv_header() -> String {
        FIELD_NAMES.join(",")
    }

    /// One CSV row; floats use the shortest representation that parses
    /// back to the identical value.
    #[must_use]
    pub fn csv_row(&self) -> String {
        let mut fields = vec![self.white_pixels.to_string(), self.area.to_string()];
        fields.extend(self.as_array()[2..].iter().map(|v| v.to_string()));
        fields.join(",")
    }

    /// Two-column human-readable table of names and values.
    #[must_use]
    pub fn format_table(&self) -> String {
        let width = FIELD_NAMES.iter().map(|n| n.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (name, value) in FIELD_NAMES.iter().zip(self.as_array()) {
            out.push_str(&format!("{name:width$}  {value}\n"));
        }
        out
    }
}

/// Extracts the full feature battery of the region of `img` selected by
/// `mask`.
///
/// Intensity and texture statistics run over the whole mask; area and
/// perimeter describe its largest 8-connected component.
pub fn extract_all(
    img: &GrayImage,
    mask: &RoiMask,
    params: &FeatureParams,
) -> Result<FeatureVector, FeatureError> {
    let shape = shape_features(mask)?;
    let mode = if params.raw_variance {
        VarianceMode::Raw
    } else {
        VarianceMode::Normalized
    };
    let intensity = intensity_features_with(img, mask, mode)?;
    let texture = texture_features(&compute_glcm(
        img,
        Some(mask),
        params.glcm_offset,
        params.glcm_levels,
    )?);

    Ok(FeatureVector {
        white_pixels: shape.white_pixels,
        area: shape.area,
        perimeter: shape.perimeter as f64,
        contrast: texture.contrast,
        correlation: texture.correlation,
        energy: texture.energy,
        homogeneity: texture.homogeneity,
        mean: intensity.mean,
        standard_deviation: intensity.standard_deviation,
        entropy: intensity.entropy,
        rms: intensity.rms,
        variance: intensity.variance,
        smoothness: intensity.smoothness,
        kurtosis: intensity.kurtosis,
        skewness: intensity.skewness,
        idm: texture.idm,
    })
}
