//! Lloyd's K-means over the 1-D gray-level distribution.
//!
//! Pixels carry no spatial features here; two pixels with the same
//! intensity always land in the same cluster. That makes it exact (and
//! fast) to run Lloyd's algorithm over the 256-bin histogram with each
//! occupied level weighted by its count: cluster sums stay exact `u64`
//! integers, so the computed centroids — and therefore the labels — are
//! bit-identical to a naive per-pixel implementation with the same
//! initialization.

use rand::SeedableRng;

use super::SegmentError;
use crate::imgcore::{GrayImage, Histogram, LEVELS};

/// Initial centroid placement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KmeansInit {
    /// `K` centroids evenly spaced over the occupied range `[min, max]`:
    /// `min + (max - min) * j / (K - 1)`, or the range midpoint for `K = 1`.
    /// Deterministic, the default.
    EvenlySpaced,
    /// `K` distinct occupied gray levels drawn without replacement from a
    /// ChaCha8 stream seeded with the given value, sorted ascending.
    SeededRandom(u64),
}

/// Result of clustering an image's gray levels.
///
/// Centroids are sorted ascending and strictly distinct (exact ties are
/// merged before output, so the cluster count can come out lower than
/// requested in degenerate cases). Every pixel's label is the index of the
/// nearest centroid by squared intensity distance, ties going to the lower
/// index.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    labels: Vec<u8>,
    centroids: Vec<f64>,
    iterations: u32,
    converged: bool,
}

impl LabelMap {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Row-major cluster index per pixel; every value is `< self.k()`.
    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Cluster label of the pixel at `(x, y)`.
    pub fn label(&self, x: usize, y: usize) -> u8 {
        assert!(x < self.width && y < self.height, "label coordinates out of bounds");
        self.labels[y * self.width + x]
    }

    /// Cluster centers, sorted ascending.
    pub fn centroids(&self) -> &[f64] {
        &self.centroids
    }

    /// Number of clusters in the output.
    pub fn k(&self) -> usize {
        self.centroids.len()
    }

    /// Sweeps performed before stopping.
    pub fn iterations(&self) -> u32 {
        self.iterations
    }

    /// Whether the maximum centroid movement dropped to the tolerance
    /// before the iteration budget ran out.
    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Renders each pixel as its cluster's centroid (rounded to the nearest
    /// gray level), the usual way to eyeball a segmentation.
    pub fn visualization(&self) -> GrayImage {
        let pixels = self
            .labels
            .iter()
            .map(|&l| self.centroids[l as usize].round().clamp(0.0, 255.0) as u8)
            .collect();
        GrayImage::new(self.width, self.height, pixels)
            .expect("label map dimensions are valid by construction")
    }
}

/// Clusters the image's gray levels into `k` groups with evenly spaced
/// initial centroids.
///
/// Runs at most `max_iter` sweeps; `converged` reports whether the largest
/// centroid movement in a sweep (re-seeding of emptied clusters included)
/// fell to `tol` first. `tol = 0` demands an exact fixed point, which
/// Lloyd's algorithm on finite data always reaches given enough sweeps.
pub fn kmeans(
    img: &GrayImage,
    k: usize,
    max_iter: u32,
    tol: f64,
) -> Result<LabelMap, SegmentError> {
    kmeans_with_init(img, k, max_iter, tol, KmeansInit::EvenlySpaced)
}

/// [`kmeans`] with an explicit initialization strategy.
pub fn kmeans_with_init(
    img: &GrayImage,
    k: usize,
    max_iter: u32,
    tol: f64,
    init: KmeansInit,
) -> Result<LabelMap, SegmentError> {
    if k == 0 {
        return Err(SegmentError::InvalidK);
    }
    if max_iter == 0 {
        return Err(SegmentError::InvalidIterations);
    }
    if !tol.is_finite() || tol < 0.0 {
        return Err(SegmentError::InvalidTolerance(tol));
    }

    let hist = Histogram::from_image(img);
    let mut levels = Vec::new();
    let mut counts = Vec::new();
    for g in 0..LEVELS {
        let c = hist.count(g as u8);
        if c > 0 {
            levels.push(g as u8);
            counts.push(c);
        }
    }
    if k > levels.len() {
        return Err(SegmentError::TooManyClusters {
            k,
            distinct: levels.len(),
        });
    }

    let mut centroids = initial_centroids(&levels, k, init);
    let mut assign = vec![0usize; levels.len()];
    let mut iterations = 0u32;
    let mut converged = false;
    let mut prev_objective = f64::INFINITY;

    while iterations < max_iter {
        let sweep_start = centroids.clone();
        assign_levels(&levels, &centroids, &mut assign);
        reseed_empty_clusters(&levels, &counts, &mut centroids, &mut assign);

        // Within-cluster sum of squared deviations must never grow:
        // assignment and update steps each minimize it for the other held
        // fixed, and re-seeding relocates only centroids that contribute
        // nothing. The slack absorbs f64 rounding only.
        let objective = weighted_objective(&levels, &counts, &centroids, &assign);
        assert!(
            objective <= prev_objective * (1.0 + 1e-12) + 1e-9,
            "clustering objective increased from {prev_objective} to {objective}"
        );
        prev_objective = objective;

        let mut sums = vec![0u64; k];
        let mut pops = vec![0u64; k];
        for i in 0..levels.len() {
            sums[assign[i]] += counts[i] * u64::from(levels[i]);
            pops[assign[i]] += counts[i];
        }
        let mut movement = 0.0f64;
        for j in 0..k {
            debug_assert!(pops[j] > 0, "re-seeding leaves no cluster empty");
            let updated = sums[j] as f64 / pops[j] as f64;
            movement = movement.max((updated - sweep_start[j]).abs());
            centroids[j] = updated;
        }

        iterations += 1;
        if movement <= tol {
            converged = true;
            break;
        }
    }

    centroids.sort_by(f64::total_cmp);
    centroids.dedup();

    let table = nearest_table(&centroids);
    let labels = img.pixels().iter().map(|&p| table[p as usize]).collect();
    Ok(LabelMap {
        width: img.width(),
        height: img.height(),
        labels,
        centroids,
        iterations,
        converged,
    })
}

fn initial_centroids(levels: &[u8], k: usize, init: KmeansInit) -> Vec<f64> {
    let lo = f64::from(levels[0]);
    let hi = f64::from(*levels.last().expect("at least one occupied level"));
    match init {
        KmeansInit::EvenlySpaced => {
            if k == 1 {
                vec![(lo + hi) / 2.0]
            } else {
                (0..k)
                    .map(|j| lo + (hi - lo) * j as f64 / (k - 1) as f64)
                    .collect()
            }
        }
        KmeansInit::SeededRandom(seed) => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut picked: Vec<f64> = rand::seq::index::sample(&mut rng, levels.len(), k)
                .into_iter()
                .map(|i| f64::from(levels[i]))
                .collect();
            picked.sort_by(f64::total_cmp);
            picked
        }
    }
}

/// Nearest-centroid assignment per occupied level, ties to the lower index.
fn assign_levels(levels: &[u8], centroids: &[f64], assign: &mut [usize]) {
    for (i, &g) in levels.iter().enumerate() {
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (j, &c) in centroids.iter().enumerate() {
            let d = f64::from(g) - c;
            let d2 = d * d;
            if d2 < best_d {
                best_d = d2;
                best = j;
            }
        }
        assign[i] = best;
    }
}

/// Moves each centroid that attracted no levels onto the gray level whose
/// pixels currently contribute the largest total squared error (lowest such
/// level on ties), then re-assigns. Runs until every cluster is populated.
fn reseed_empty_clusters(
    levels: &[u8],
    counts: &[u64],
    centroids: &mut [f64],
    assign: &mut [usize],
) {
    let k = centroids.len();
    let mut guard = 0;
    loop {
        let mut pops = vec![0u64; k];
        for (i, &a) in assign.iter().enumerate() {
            pops[a] += counts[i];
        }
        let Some(empty) = (0..k).find(|&j| pops[j] == 0) else {
            return;
        };

        let mut best_i = None;
        let mut best_r = 0.0f64;
        for i in 0..levels.len() {
            let d = f64::from(levels[i]) - centroids[assign[i]];
            let r = counts[i] as f64 * d * d;
            if r > best_r {
                best_r = r;
                best_i = Some(i);
            }
        }
        // An empty cluster with every level sitting exactly on a centroid
        // would need more centroids than distinct levels, which the
        // cluster-count precondition rules out.
        let i = best_i.expect("an empty cluster implies a level with positive residual");
        centroids[empty] = f64::from(levels[i]);
        assign_levels(levels, centroids, assign);

        guard += 1;
        assert!(guard <= 2 * LEVELS, "cluster re-seeding failed to stabilize");
    }
}

fn weighted_objective(levels: &[u8], counts: &[u64], centroids: &[f64], assign: &[usize]) -> f64 {
    let mut j = 0.0;
    for i in 0..levels.len() {
        let d = f64::from(levels[i]) - centroids[assign[i]];
        j += counts[i] as f64 * d * d;
    }
    j
}

/// Nearest final centroid for every representable gray level.
fn nearest_table(centroids: &[f64]) -> Vec<u8> {
    (0..LEVELS)
        .map(|g| {
            let mut best = 0usize;
            let mut best_d = f64::INFINITY;
            for (j, &c) in centroids.iter().enumerate() {
                let d = g as f64 - c;
                let d2 = d * d;
                if d2 < best_d {
                    best_d = d2;
                    best = j;
                }
            }
            best as u8
        })
        .collect()
}
