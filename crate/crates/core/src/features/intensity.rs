//! First-order intensity statistics over the masked pixels.

use super::FeatureError;
use crate::imgcore::{GrayImage, LEVELS};
use crate::segment::RoiMask;

/// Statistics of the masked pixel multiset.
///
/// Moments are population moments (divide by `n`, not `n - 1`).
/// `standard_deviation` and `rms` stay in raw gray-level units.
/// `variance` defaults to the squared deviation normalized by `255²` so it
/// lands in `[0, 1]`, and `smoothness = 1 - 1/(1 + variance)` consumes
/// whichever variance convention was requested; see [`VarianceMode`].
/// Skewness (`m3/σ³`) and non-excess kurtosis (`m4/σ⁴`) are both defined
/// as 0 for a constant region, and `entropy` is the Shannon entropy of the
/// masked gray-level distribution in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensityFeatures {
    pub mean: f64,
    pub standard_deviation: f64,
    pub variance: f64,
    pub rms: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub smoothness: f64,
    pub entropy: f64,
}

/// Which units the reported variance (and therefore smoothness) uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarianceMode {
    /// `std² / 255²`, dimensionless in `[0, 1]`. The default: it keeps
    /// smoothness usefully away from saturating at 1.
    #[default]
    Normalized,
    /// Plain `std²` in gray-level² units.
    Raw,
}

/// [`intensity_features_with`] under the default normalized variance.
pub fn intensity_features(
    img: &GrayImage,
    mask: &RoiMask,
) -> Result<IntensityFeatures, FeatureError> {
    intensity_features_with(img, mask, VarianceMode::Normalized)
}

/// Computes the eight intensity statistics over the pixels of `img`
/// selected by `mask`.
pub fn intensity_features_with(
    img: &GrayImage,
    mask: &RoiMask,
    mode: VarianceMode,
) -> Result<IntensityFeatures, FeatureError> {
    if img.width() != mask.width() || img.height() != mask.height() {
        return Err(FeatureError::DimensionMismatch(
            mask.width(),
            mask.height(),
            img.width(),
            img.height(),
        ));
    }

    // Everything derives from the masked histogram; the linear and
    // quadratic sums stay exact integers.
    let mut counts = [0u64; LEVELS];
    let mut n = 0u64;
    for (&px, &bit) in img.pixels().iter().zip(mask.bits()) {
        if bit {
            counts[px as usize] += 1;
            n += 1;
        }
    }
    if n == 0 {
        return Err(FeatureError::EmptyMask);
    }

    let mut sum = 0u64;
    let mut sum_sq = 0u64;
    for (g, &c) in counts.iter().enumerate() {
        let g = g as u64;
        sum += c * g;
        sum_sq += c * g * g;
    }
    let nf = n as f64;
    let mean = sum as f64 / nf;
    let rms = (sum_sq as f64 / nf).sqrt();

    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    let mut entropy = 0.0;
    for (g, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let w = c as f64;
        let d = g as f64 - mean;
        let d2 = d * d;
        m2 += w * d2;
        m3 += w * d2 * d;
        m4 += w * d2 * d2;
        let p = w / nf;
        entropy -= p * p.log2();
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;

    let standard_deviation = m2.sqrt();
    let (skewness, kurtosis) = if standard_deviation == 0.0 {
        (0.0, 0.0)
    } else {
        (m3 / (m2 * standard_deviation), m4 / (m2 * m2))
    };
    let variance = match mode {
        VarianceMode::Normalized => m2 / (255.0 * 255.0),
        VarianceMode::Raw => m2,
    };
    let smoothness = 1.0 - 1.0 / (1.0 + variance);

    Ok(IntensityFeatures {
        mean,
        standard_deviation,
        variance,
        rms,
        skewness,
        kurtosis,
        smoothness,
        entropy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full_mask(img: &GrayImage) -> RoiMask {
        RoiMask::new(img.width(), img.height(), vec![true; img.pixel_count()], None)
    }

    #[test]
    fn constant_region_degenerates_cleanly() {
        let img = GrayImage::constant(4, 4, 60);
        let f = intensity_features(&img, &full_mask(&img)).unwrap();
        assert_eq!(f.mean, 60.0);
        assert_eq!(f.standard_deviation, 0.0);
        assert_eq!(f.variance, 0.0);
        assert_eq!(f.rms, 60.0);
        assert_eq!(f.skewness, 0.0);
        assert_eq!(f.kurtosis, 0.0);
        assert_eq!(f.smoothness, 0.0);
        assert_eq!(f.entropy, 0.0);
    }

    #[test]
    fn balanced_extremes_hand_computed() {
        let img = GrayImage::new(4, 1, vec![0, 255, 0, 255]).unwrap();
        let f = intensity_features(&img, &full_mask(&img)).unwrap();
        assert_eq!(f.mean, 127.5);
        assert_eq!(f.standard_deviation, 127.5);
        assert_eq!(f.variance, 0.25);
        assert_eq!(f.entropy, 1.0);
        assert_eq!(f.skewness, 0.0);
        assert_eq!(f.kurtosis, 1.0);
        assert!((f.rms - 255.0 / 2.0f64.sqrt()).abs() < 1e-12);
        assert_eq!(f.smoothness, 1.0 - 1.0 / 1.25);
    }

    #[test]
    fn raw_variance_mode_reports_squared_deviation() {
        let img = GrayImage::new(4, 1, vec![0, 255, 0, 255]).unwrap();
        let f = intensity_features_with(&img, &full_mask(&img), VarianceMode::Raw).unwrap();
        assert_eq!(f.variance, 127.5 * 127.5);
        assert_eq!(f.smoothness, 1.0 - 1.0 / (1.0 + 127.5 * 127.5));
        // Raw-variance smoothness saturates near 1 on any textured region.
        assert!(f.smoothness > 0.999);
    }

    #[test]
    fn only_masked_pixels_contribute() {
        let img = GrayImage::new(4, 1, vec![10, 200, 30, 200]).unwrap();
        let mask = RoiMask::new(4, 1, vec![true, false, true, false], None);
        let f = intensity_features(&img, &mask).unwrap();
        assert_eq!(f.mean, 20.0);
        assert_eq!(f.entropy, 1.0);
    }

    #[test]
    fn skewness_sign_tracks_the_tail() {
        // Mostly low values with one high outlier: right tail, positive skew.
        let img = GrayImage::new(5, 1, vec![10, 10, 10, 10, 250]).unwrap();
        let f = intensity_features(&img, &full_mask(&img)).unwrap();
        assert!(f.skewness > 0.0);
        let flipped = GrayImage::new(5, 1, vec![250, 250, 250, 250, 10]).unwrap();
        let g = intensity_features(&flipped, &full_mask(&flipped)).unwrap();
        assert!(g.skewness < 0.0);
    }

    #[test]
    fn std_squared_matches_raw_variance() {
        let img = GrayImage::from_fn(8, 8, |x, y| ((x * 31 + y * 17) % 256) as u8);
        let f = intensity_features_with(&img, &full_mask(&img), VarianceMode::Raw).unwrap();
        let rel = (f.standard_deviation * f.standard_deviation - f.variance).abs()
            / f.variance.max(1.0);
        assert!(rel < 1e-6);
    }

    #[test]
    fn empty_mask_and_dimension_mismatch_are_rejected() {
        let img = GrayImage::constant(3, 3, 5);
        let empty = RoiMask::new(3, 3, vec![false; 9], None);
        assert!(matches!(
            intensity_features(&img, &empty),
            Err(FeatureError::EmptyMask)
        ));
        let wrong = RoiMask::new(2, 3, vec![true; 6], None);
        assert!(matches!(
            intensity_features(&img, &wrong),
            Err(FeatureError::DimensionMismatch(..))
        ));
    }
}
