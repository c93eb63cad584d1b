//! Core image primitives: 8-bit grayscale images and intensity histograms.

pub mod io;

pub use io::{load_image, save_image, ImageError};

/// Number of representable gray levels in an 8-bit image.
pub const LEVELS: usize = 256;

/// An 8-bit single-channel image stored in row-major order.
///
/// Both dimensions are always at least 1; the empty image is not
/// representable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    /// Builds an image from row-major pixel data.
    ///
    /// Fails when either dimension is zero or when `pixels.len()` does not
    /// equal `width * height`.
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(ImageError::InvalidDimensions {
                width,
                height,
                pixels: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Builds a `width x height` image filled with a single value.
    ///
    /// # Panics
    ///
    /// Panics if either dimension is zero.
    #[must_use]
    pub fn constant(width: usize, height: usize, value: u8) -> Self {
        Self::new(width, height, vec![value; width * height])
            .expect("constant image dimensions must be nonzero")
    }

    /// Builds an image by evaluating `f(x, y)` at every coordinate.
    ///
    /// # Panics
    ///
    /// Panics if either dimension is zero.
    #[must_use]
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels).expect("from_fn image dimensions must be nonzero")
    }

    #[must_use]
    pub fn width(&self) -> usize {
        self.width
    }

    #[must_use]
    pub fn height(&self) -> usize {
        self.height
    }

    /// Total number of pixels (`width * height`, never zero).
    #[must_use]
    pub fn pixel_count(&self) -> usize {
        self.pixels.len()
    }

    /// Row-major pixel data.
    #[must_use]
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// Pixel value at column `x`, row `y`.
    ///
    /// # Panics
    ///
    /// Panics when the coordinate is out of bounds.
    #[must_use]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        assert!(x < self.width && y < self.height, "pixel out of bounds");
        self.pixels[y * self.width + x]
    }

    /// Returns a copy with every pixel replaced by `f(pixel)`.
    #[must_use]
    pub fn map(&self, mut f: impl FnMut(u8) -> u8) -> Self {
        Self {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&p| f(p)).collect(),
        }
    }
}

/// A 256-bin intensity histogram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: [u64; LEVELS],
    total: u64,
}

impl Histogram {
    /// Counts every pixel of `img` into its gray-level bin.
    #[must_use]
    pub fn from_image(img: &GrayImage) -> Self {
        let mut counts = [0u64; LEVELS];
        for &p in img.pixels() {
            counts[p as usize] += 1;
        }
        Self {
            counts,
            total: img.pixel_count() as u64,
        }
    }

    /// Builds a histogram directly from bin counts.
    #[must_use]
    pub fn from_counts(counts: [u64; LEVELS]) -> Self {
        let total = counts.iter().sum();
        Self { counts, total }
    }

    #[must_use]
    pub fn counts(&self) -> &[u64; LEVELS] {
        &self.counts
    }

    #[must_use]
    pub fn count(&self, level: u8) -> u64 {
        self.counts[level as usize]
    }

    /// Sum of all bin counts.
    #[must_use]
    pub fn total(&self) -> u64 {
        self.total
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Empirical probability of gray level `k` (0 for an empty histogram).
    #[must_use]
    pub fn pdf(&self, k: u8) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.counts[k as usize] as f64 / self.total as f64
        }
    }

    /// Cumulative distribution evaluated at every gray level.
    ///
    /// `cdf[k]` is the fraction of pixels with value `<= k`; `cdf[255]` is
    /// exactly 1 for any non-empty histogram.
    #[must_use]
    pub fn cdf(&self) -> [f64; LEVELS] {
        let mut cdf = [0.0; LEVELS];
        let mut cum = 0u64;
        for (k, &c) in self.counts.iter().enumerate() {
            cum += c;
            cdf[k] = if self.total == 0 {
                0.0
            } else {
                cum as f64 / self.total as f64
            };
        }
        cdf
    }

    /// First and last occupied gray levels within `lo..=hi`, or `None` when
    /// no pixel falls in that range.
    #[must_use]
    pub fn occupied_bounds(&self, lo: u8, hi: u8) -> Option<(u8, u8)> {
        let first = (lo..=hi).find(|&k| self.counts[k as usize] > 0)?;
        let last = (lo..=hi).rev().find(|&k| self.counts[k as usize] > 0)?;
        Some((first, last))
    }

    /// Number of distinct gray levels with a nonzero count.
    #[must_use]
    pub fn distinct_levels(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// Count-weighted mean gray level. Returns 0 for an empty histogram.
    #[must_use]
    pub fn mean(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let weighted: u64 = self
            .counts
            .iter()
            .enumerate()
            .map(|(k, &c)| k as u64 * c)
            .sum();
        weighted as f64 / self.total as f64
    }
}

/// Counts the pixels of `img` into a 256-bin histogram.
#[must_use]
pub fn compute_histogram(img: &GrayImage) -> Histogram {
    Histogram::from_image(img)
}

/// Arithmetic mean intensity of all pixels.
///
/// The pixel sum is accumulated in integer arithmetic, so the result is the
/// correctly rounded double of the true rational mean.
#[must_use]
pub fn mean_intensity(img: &GrayImage) -> f64 {
    let sum: u64 = img.pixels().iter().map(|&p| p as u64).sum();
    sum as f64 / img.pixel_count() as f64
}
