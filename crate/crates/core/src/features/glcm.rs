//! Gray-level co-occurrence matrix construction and the texture statistics
//! derived from it.

use super::FeatureError;
use crate::imgcore::GrayImage;
use crate::segment::RoiMask;

/// A normalized, symmetric co-occurrence matrix over `levels` quantized
/// gray bins. Entries sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Glcm {
    levels: usize,
    probabilities: Vec<f64>,
}

impl Glcm {
    /// Quantization bin count `Q`.
    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Row-major `Q×Q` probabilities.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Probability of the quantized pair `(i, j)`.
    pub fn prob(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.levels && j < self.levels, "pair indices out of range");
        self.probabilities[i * self.levels + j]
    }
}

/// Maps a gray level into one of `q` equal-width bins: `floor(g * q / 256)`.
#[must_use]
pub fn quantize(g: u8, q: usize) -> usize {
    usize::from(g) * q / 256
}

/// Builds the co-occurrence matrix of `img` for pixel pairs displaced by
/// `offset = (dy, dx)`, quantized to `q` bins.
///
/// A pair contributes only when both endpoints are inside the image and —
/// when `mask` is given — both are set in the mask. Accumulation is
/// symmetric: each pair is counted in both orientations, so the matrix
/// equals its transpose by construction. The default elsewhere in this
/// crate is `q = 8`, `offset = (0, 1)` (horizontal neighbors).
pub fn compute_glcm(
    img: &GrayImage,
    mask: Option<&RoiMask>,
    offset: (i32, i32),
    q: usize,
) -> Result<Glcm, FeatureError> {
    if offset == (0, 0) {
        return Err(FeatureError::InvalidOffset);
    }
    if !(2..=256).contains(&q) {
        return Err(FeatureError::InvalidQuantization(q));
    }
    if let Some(m) = mask {
        if m.width() != img.width() || m.height() != img.height() {
            return Err(FeatureError::DimensionMismatch(
                m.width(),
                m.height(),
                img.width(),
                img.height(),
            ));
        }
    }

    let (dy, dx) = offset;
    let (w, h) = (img.width() as i64, img.height() as i64);
    let mut counts = vec![0u64; q * q];
    let mut total = 0u64;
    for y in 0..h {
        for x in 0..w {
            let (nx, ny) = (x + i64::from(dx), y + i64::from(dy));
            if nx < 0 || ny < 0 || nx >= w || ny >= h {
                continue;
            }
            let (x, y, nx, ny) = (x as usize, y as usize, nx as usize, ny as usize);
            if let Some(m) = mask {
                if !m.get(x, y) || !m.get(nx, ny) {
                    continue;
                }
            }
            let a = quantize(img.get(x, y), q);
            let b = quantize(img.get(nx, ny), q);
            counts[a * q + b] += 1;
            counts[b * q + a] += 1;
            total += 2;
        }
    }

    if total == 0 {
        return Err(FeatureError::DegenerateGlcm);
    }
    let probabilities = counts.iter().map(|&c| c as f64 / total as f64).collect();
    Ok(Glcm {
        levels: q,
        probabilities,
    })
}

/// The six co-occurrence statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TextureFeatures {
    /// `Σ (i-j)² P[i][j]` — local intensity variation.
    pub contrast: f64,
    /// Pearson correlation of the pair distribution, 1 for the degenerate
    /// single-bin matrix (σᵢσⱼ = 0); symmetric accumulation keeps it in
    /// `[-1, 1]`.
    pub correlation: f64,
    /// `Σ P²`, also known as angular second moment or uniformity.
    pub energy: f64,
    /// `Σ P / (1 + |i-j|)`.
    pub homogeneity: f64,
    /// `-Σ P log2 P` over nonzero entries, in bits.
    pub glcm_entropy: f64,
    /// Inverse difference moment, `Σ P / (1 + (i-j)²)`.
    pub idm: f64,
}

/// Derives the texture statistics from a co-occurrence matrix.
#[must_use]
pub fn texture_features(g: &Glcm) -> TextureFeatures {
    let q = g.levels();

    // Row marginal; the matrix is symmetric, so the column marginal and
    // its moments are identical.
    let mut marginal = vec![0.0f64; q];
    for i in 0..q {
        for j in 0..q {
            marginal[i] += g.prob(i, j);
        }
    }
    let mu: f64 = marginal.iter().enumerate().map(|(i, &p)| i as f64 * p).sum();
    let sigma_sq: f64 = marginal
        .iter()
        .enumerate()
        .map(|(i, &p)| (i as f64 - mu) * (i as f64 - mu) * p)
        .sum();

    let mut contrast = 0.0;
    let mut cross = 0.0;
    let mut energy = 0.0;
    let mut homogeneity = 0.0;
    let mut glcm_entropy = 0.0;
    let mut idm = 0.0;
    for i in 0..q {
        for j in 0..q {
            let p = g.prob(i, j);
            let d = i as f64 - j as f64;
            contrast += d * d * p;
            cross += (i as f64 - mu) * (j as f64 - mu) * p;
            energy += p * p;
            homogeneity += p / (1.0 + d.abs());
            idm += p / (1.0 + d * d);
            if p > 0.0 {
                glcm_entropy -= p * p.log2();
            }
        }
    }
    let correlation = if sigma_sq == 0.0 { 1.0 } else { cross / sigma_sq };

    TextureFeatures {
        contrast,
        correlation,
        energy,
        homogeneity,
        glcm_entropy,
        idm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantization_is_floor_of_scaled_level() {
        assert_eq!(quantize(0, 8), 0);
        assert_eq!(quantize(31, 8), 0);
        assert_eq!(quantize(32, 8), 1);
        assert_eq!(quantize(255, 8), 7);
        assert_eq!(quantize(255, 256), 255);
        assert_eq!(quantize(128, 2), 1);
        assert_eq!(quantize(127, 2), 0);
    }

    #[test]
    fn two_by_two_rows_hand_enumerated() {
        // Quantized at Q=2 this is [[0,0],[1,1]]: horizontal pairs (0,0)
        // and (1,1), so the symmetric matrix is diagonal half-and-half.
        let img = GrayImage::new(2, 2, vec![0, 0, 255, 255]).unwrap();
        let g = compute_glcm(&img, None, (0, 1), 2).unwrap();
        assert_eq!(g.prob(0, 0), 0.5);
        assert_eq!(g.prob(1, 1), 0.5);
        assert_eq!(g.prob(0, 1), 0.0);
        assert_eq!(g.prob(1, 0), 0.0);

        let t = texture_features(&g);
        assert_eq!(t.contrast, 0.0);
        assert_eq!(t.energy, 0.5);
        assert_eq!(t.homogeneity, 1.0);
        assert_eq!(t.idm, 1.0);
        assert_eq!(t.glcm_entropy, 1.0);
        assert_eq!(t.correlation, 1.0);
    }

    #[test]
    fn checkerboard_is_perfectly_anticorrelated() {
        let img = GrayImage::from_fn(4, 4, |x, y| if (x + y) % 2 == 0 { 0 } else { 255 });
        let g = compute_glcm(&img, None, (0, 1), 2).unwrap();
        assert_eq!(g.prob(0, 1), 0.5);
        assert_eq!(g.prob(1, 0), 0.5);

        let t = texture_features(&g);
        assert_eq!(t.contrast, 1.0);
        assert_eq!(t.homogeneity, 0.5);
        assert_eq!(t.energy, 0.5);
        assert_eq!(t.correlation, -1.0);
        assert_eq!(t.idm, 0.5);
    }

    #[test]
    fn constant_image_gives_the_single_entry_degenerate_matrix() {
        let img = GrayImage::constant(4, 4, 100);
        let g = compute_glcm(&img, None, (0, 1), 8).unwrap();
        let t = texture_features(&g);
        assert_eq!(t.contrast, 0.0);
        assert_eq!(t.energy, 1.0);
        assert_eq!(t.homogeneity, 1.0);
        assert_eq!(t.idm, 1.0);
        assert_eq!(t.glcm_entropy, 0.0);
        assert_eq!(t.correlation, 1.0);
    }

    #[test]
    fn matrix_is_symmetric_and_sums_to_one() {
        let img = GrayImage::from_fn(9, 7, |x, y| ((x * 43 + y * 29) % 256) as u8);
        for offset in [(0, 1), (1, 0), (1, 1), (1, -1)] {
            let g = compute_glcm(&img, None, offset, 8).unwrap();
            let sum: f64 = g.probabilities().iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
            for i in 0..8 {
                for j in 0..8 {
                    assert_eq!(g.prob(i, j), g.prob(j, i));
                }
            }
        }
    }

    #[test]
    fn masked_pairs_require_both_endpoints_inside() {
        let img = GrayImage::new(3, 1, vec![0, 128, 255]).unwrap();
        let mask = RoiMask::new(3, 1, vec![true, true, false], None);
        let g = compute_glcm(&img, Some(&mask), (0, 1), 2).unwrap();
        // Only the (0, 128) pair survives; quantized (0, 1).
        assert_eq!(g.prob(0, 1), 0.5);
        assert_eq!(g.prob(1, 0), 0.5);
        assert_eq!(g.prob(1, 1), 0.0);
    }

    #[test]
    fn degenerate_when_no_pair_fits() {
        let img = GrayImage::new(3, 3, vec![0; 9]).unwrap();
        let mask = RoiMask::new(3, 3, {
            let mut bits = vec![false; 9];
            bits[4] = true;
            bits
        }, None);
        assert!(matches!(
            compute_glcm(&img, Some(&mask), (0, 1), 2),
            Err(FeatureError::DegenerateGlcm)
        ));
        // A single-column image has no horizontal pairs at all.
        let col = GrayImage::new(1, 5, vec![9; 5]).unwrap();
        assert!(matches!(
            compute_glcm(&col, None, (0, 1), 2),
            Err(FeatureError::DegenerateGlcm)
        ));
    }

    #[test]
    fn parameter_validation() {
        let img = GrayImage::constant(2, 2, 0);
        assert!(matches!(
            compute_glcm(&img, None, (0, 0), 8),
            Err(FeatureError::InvalidOffset)
        ));
        assert!(matches!(
            compute_glcm(&img, None, (0, 1), 1),
            Err(FeatureError::InvalidQuantization(1))
        ));
        assert!(matches!(
            compute_glcm(&img, None, (0, 1), 257),
            Err(FeatureError::InvalidQuantization(257))
        ));
        let mask = RoiMask::new(3, 2, vec![true; 6], None);
        assert!(matches!(
            compute_glcm(&img, Some(&mask), (0, 1), 8),
            Err(FeatureError::DimensionMismatch(..))
        ));
    }

    #[test]
    fn identity_quantization_marginal_matches_pair_distribution() {
        let img = GrayImage::from_fn(8, 8, |x, y| ((x * 37 + y * 11) % 256) as u8);
        let g = compute_glcm(&img, None, (0, 1), 256).unwrap();
        // Count each gray level's appearances across all horizontal pairs
        // (both endpoints), normalized — the matrix marginal must agree.
        let mut expected = vec![0.0f64; 256];
        let mut total = 0u64;
        for y in 0..8 {
            for x in 0..7 {
                expected[img.get(x, y) as usize] += 1.0;
                expected[img.get(x + 1, y) as usize] += 1.0;
                total += 2;
            }
        }
        for e in &mut expected {
            *e /= total as f64;
        }
        for i in 0..256 {
            let marginal: f64 = (0..256).map(|j| g.prob(i, j)).sum();
            assert!((marginal - expected[i]).abs() < 1e-12);
        }
    }
}
