//! Shared machinery for the integration suites: random image corpora, a
//! synthetic tumor phantom with known ground truth, independent
//! brute-force oracles (per-pixel K-means, the 16-feature battery, an
//! exhaustive dual-QP solver), and helpers for driving the `mrgrade`
//! binary.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mrgrade_core::classify::Grade;
use mrgrade_core::features::FEATURE_DIM;
use mrgrade_core::imgcore::{save_image, GrayImage, LEVELS};
use mrgrade_core::segment::RoiMask;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Random image corpora
// ---------------------------------------------------------------------------

/// One random image up to `max_side` per edge, with the histogram shape
/// drawn from six families: uniform, bell, bimodal, narrow band, diagonal
/// ramp, constant.
pub fn varied_image(rng: &mut ChaCha8Rng, max_side: usize) -> GrayImage {
    let w = rng.random_range(1..=max_side);
    let h = rng.random_range(1..=max_side);
    match rng.random_range(0..6) {
        0 => from_rng(rng, w, h, |r| r.random()),
        1 => from_rng(rng, w, h, |r| {
            let s: u32 = (0..4).map(|_| u32::from(r.random::<u8>())).sum();
            (s / 4) as u8
        }),
        2 => from_rng(rng, w, h, |r| {
            if r.random_bool(0.5) {
                r.random_range(20..=60)
            } else {
                r.random_range(180..=230)
            }
        }),
        3 => {
            let lo: u8 = rng.random_range(0..=215);
            let span: u8 = rng.random_range(0..=40);
            from_rng(rng, w, h, move |r| lo + r.random_range(0..=span))
        }
        4 => {
            let sx = rng.random_range(1..=9);
            let sy = rng.random_range(1..=9);
            GrayImage::from_fn(w, h, move |x, y| ((x * sx + y * sy) % 256) as u8)
        }
        _ => GrayImage::constant(w, h, rng.random()),
    }
}

fn from_rng(
    rng: &mut ChaCha8Rng,
    w: usize,
    h: usize,
    mut pixel: impl FnMut(&mut ChaCha8Rng) -> u8,
) -> GrayImage {
    let px = (0..w * h).map(|_| pixel(rng)).collect();
    GrayImage::new(w, h, px).expect("dimensions match pixel count")
}

pub fn varied_corpus(count: usize, seed: u64, max_side: usize) -> Vec<GrayImage> {
    let mut rng = rng(seed);
    (0..count).map(|_| varied_image(&mut rng, max_side)).collect()
}

/// A bright, low-contrast image: every pixel inside a band starting at
/// 130..=159 and spanning 30..=90 levels, bunched toward the band middle.
pub fn low_contrast_image(rng: &mut ChaCha8Rng, side: usize) -> GrayImage {
    let lo: u16 = 130 + rng.random_range(0..30);
    let span: u16 = 30 + rng.random_range(0..=60);
    from_rng(rng, side, side, move |r| {
        let a = r.random_range(0..=span);
        let b = r.random_range(0..=span);
        (lo + (a + b) / 2) as u8
    })
}

pub fn low_contrast_corpus(count: usize, seed: u64, side: usize) -> Vec<GrayImage> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| low_contrast_image(&mut rng, side))
        .collect()
}

// ---------------------------------------------------------------------------
// Tumor phantom with known ground truth
// ---------------------------------------------------------------------------

/// A 256×256 synthetic scan: noisy dark background, noisy mid-gray brain
/// ellipse, and one uniform bright tumor ellipse whose exact pixel set is
/// the ground truth. The grade is determined by tumor size — benign
/// semi-axes 12..=15, malignant 20..=26 — so the label is known by
/// construction.
pub struct Phantom {
    pub image: GrayImage,
    pub tumor: RoiMask,
    pub grade: Grade,
}

pub const PHANTOM_SIDE: usize = 256;

pub fn phantom(rng: &mut ChaCha8Rng, grade: Grade) -> Phantom {
    let bcx = 128.0 + rng.random_range(-8.0..=8.0);
    let bcy = 128.0 + rng.random_range(-8.0..=8.0);
    let ba = rng.random_range(65.0..=80.0);
    let bb = rng.random_range(65.0..=80.0);

    let (axis_lo, axis_hi) = match grade {
        Grade::Benign => (12.0, 15.0),
        Grade::Malignant => (20.0, 26.0),
    };
    let ta = rng.random_range(axis_lo..=axis_hi);
    let tb = rng.random_range(axis_lo..=axis_hi);
    let tcx = bcx + rng.random_range(-18.0..=18.0);
    let tcy = bcy + rng.random_range(-18.0..=18.0);
    let tumor_level: u8 = rng.random_range(210..=220);

    let inside = |x: usize, y: usize, cx: f64, cy: f64, a: f64, b: f64| {
        let dx = (x as f64 - cx) / a;
        let dy = (y as f64 - cy) / b;
        dx * dx + dy * dy <= 1.0
    };

    let n = PHANTOM_SIDE * PHANTOM_SIDE;
    let mut pixels = Vec::with_capacity(n);
    let mut bits = Vec::with_capacity(n);
    for y in 0..PHANTOM_SIDE {
        for x in 0..PHANTOM_SIDE {
            let in_tumor = inside(x, y, tcx, tcy, ta, tb);
            let value = if in_tumor {
                tumor_level
            } else if inside(x, y, bcx, bcy, ba, bb) {
                rng.random_range(83..=87)
            } else {
                rng.random_range(14..=18)
            };
            pixels.push(value);
            bits.push(in_tumor);
        }
    }

    Phantom {
        image: GrayImage::new(PHANTOM_SIDE, PHANTOM_SIDE, pixels)
            .expect("dimensions match pixel count"),
        tumor: RoiMask::new(PHANTOM_SIDE, PHANTOM_SIDE, bits, None),
        grade,
    }
}

// ---------------------------------------------------------------------------
// Per-pixel K-means oracle
// ---------------------------------------------------------------------------

pub struct NaiveKmeans {
    pub labels: Vec<u8>,
    pub centroids: Vec<f64>,
    pub iterations: u32,
    pub converged: bool,
}

/// Lloyd's algorithm written directly over the pixels, following the
/// documented rules: nearest centroid with ties to the lower index, empty
/// clusters re-seeded onto the gray level contributing the most total
/// squared error (lowest level on ties, first empty cluster first),
/// movement measured against the sweep-start centroids, final centroids
/// sorted and exact duplicates merged.
pub fn naive_kmeans(
    img: &GrayImage,
    k: usize,
    max_iter: u32,
    tol: f64,
    seed: Option<u64>,
) -> NaiveKmeans {
    let px = img.pixels();
    let mut counts = [0u64; LEVELS];
    for &p in px {
        counts[p as usize] += 1;
    }
    let levels: Vec<u8> = (0..LEVELS)
        .filter(|&g| counts[g] > 0)
        .map(|g| g as u8)
        .collect();
    assert!(k >= 1 && k <= levels.len(), "oracle preconditions");

    let nearest = |value: u8, centroids: &[f64]| -> usize {
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (j, &c) in centroids.iter().enumerate() {
            let d = f64::from(value) - c;
            let d2 = d * d;
            if d2 < best_d {
                best_d = d2;
                best = j;
            }
        }
        best
    };

    let lo = f64::from(levels[0]);
    let hi = f64::from(*levels.last().unwrap());
    let mut centroids: Vec<f64> = match seed {
        None => {
            if k == 1 {
                vec![(lo + hi) / 2.0]
            } else {
                (0..k)
                    .map(|j| lo + (hi - lo) * j as f64 / (k - 1) as f64)
                    .collect()
            }
        }
        Some(seed) => {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let mut picked: Vec<f64> = rand::seq::index::sample(&mut r, levels.len(), k)
                .into_iter()
                .map(|i| f64::from(levels[i]))
                .collect();
            picked.sort_by(f64::total_cmp);
            picked
        }
    };

    let mut iterations = 0u32;
    let mut converged = false;
    while iterations < max_iter {
        let sweep_start = centroids.clone();

        // Re-seed until every cluster owns at least one pixel.
        loop {
            let mut pops = vec![0u64; k];
            for &p in px {
                pops[nearest(p, &centroids)] += 1;
            }
            let Some(empty) = (0..k).find(|&j| pops[j] == 0) else {
                break;
            };
            let mut best_level = None;
            let mut best_r = 0.0f64;
            for &g in &levels {
                let d = f64::from(g) - centroids[nearest(g, &centroids)];
                let r = counts[g as usize] as f64 * d * d;
                if r > best_r {
                    best_r = r;
                    best_level = Some(g);
                }
            }
            centroids[empty] =
                f64::from(best_level.expect("emptiness implies a positive residual"));
        }

        let mut sums = vec![0u64; k];
        let mut pops = vec![0u64; k];
        for &p in px {
            let j = nearest(p, &centroids);
            sums[j] += u64::from(p);
            pops[j] += 1;
        }
        let mut movement = 0.0f64;
        for j in 0..k {
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
    let labels = px.iter().map(|&p| nearest(p, &centroids) as u8).collect();
    NaiveKmeans {
        labels,
        centroids,
        iterations,
        converged,
    }
}

// ---------------------------------------------------------------------------
// Brute-force feature oracle
// ---------------------------------------------------------------------------

/// Independent implementation of the 16 region features, in serialization
/// order. Returns `None` when the mask is empty or no pixel pair fits the
/// co-occurrence offset, the inputs the library rejects.
pub fn oracle_features(
    img: &GrayImage,
    mask: &RoiMask,
    glcm_levels: usize,
    glcm_offset: (i32, i32),
    raw_variance: bool,
) -> Option<[f64; FEATURE_DIM]> {
    let (w, h) = (img.width(), img.height());
    let bit = |x: usize, y: usize| mask.bits()[y * w + x];

    let white: u64 = mask.bits().iter().filter(|&&b| b).count() as u64;
    if white == 0 {
        return None;
    }

    // Largest 8-connected component, ties to the first in row-major
    // discovery order.
    let mut comp = vec![usize::MAX; w * h];
    let mut sizes: Vec<usize> = Vec::new();
    for start in 0..w * h {
        if !mask.bits()[start] || comp[start] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        let mut queue = vec![start];
        comp[start] = id;
        let mut size = 0usize;
        while let Some(i) = queue.pop() {
            size += 1;
            let (x, y) = (i % w, i / w);
            for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                    if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                        continue;
                    }
                    let n = ny as usize * w + nx as usize;
                    if mask.bits()[n] && comp[n] == usize::MAX {
                        comp[n] = id;
                        queue.push(n);
                    }
                }
            }
        }
        sizes.push(size);
    }
    let mut biggest = 0usize;
    for (id, &size) in sizes.iter().enumerate() {
        if size > sizes[biggest] {
            biggest = id;
        }
    }
    let area = sizes[biggest] as u64;
    let in_comp = |x: usize, y: usize| comp[y * w + x] == biggest;

    let mut perimeter = 0u64;
    for y in 0..h {
        for x in 0..w {
            if !in_comp(x, y) {
                continue;
            }
            let exposed = x == 0
                || y == 0
                || x == w - 1
                || y == h - 1
                || !in_comp(x - 1, y)
                || !in_comp(x + 1, y)
                || !in_comp(x, y - 1)
                || !in_comp(x, y + 1);
            if exposed {
                perimeter += 1;
            }
        }
    }

    // First-order intensity statistics of the masked pixel multiset.
    let values: Vec<f64> = (0..h)
        .flat_map(|y| (0..w).map(move |x| (x, y)))
        .filter(|&(x, y)| bit(x, y))
        .map(|(x, y)| f64::from(img.get(x, y)))
        .collect();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let rms = (values.iter().map(|v| v * v).sum::<f64>() / n).sqrt();
    let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m3 = values.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / n;
    let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    let std = m2.sqrt();
    let (skewness, kurtosis) = if std == 0.0 {
        (0.0, 0.0)
    } else {
        (m3 / (m2 * std), m4 / (m2 * m2))
    };
    let variance = if raw_variance { m2 } else { m2 / (255.0 * 255.0) };
    let smoothness = 1.0 - 1.0 / (1.0 + variance);

    let mut level_counts = [0u64; LEVELS];
    for &v in &values {
        level_counts[v as usize] += 1;
    }
    let mut entropy = 0.0;
    for &c in &level_counts {
        if c > 0 {
            let p = c as f64 / n;
            entropy -= p * p.log2();
        }
    }

    // Symmetric co-occurrence distribution over quantized pairs.
    let q = glcm_levels;
    let quant = |g: u8| usize::from(g) * q / 256;
    let (dy, dx) = (i64::from(glcm_offset.0), i64::from(glcm_offset.1));
    let mut pair_counts = vec![0u64; q * q];
    let mut pairs = 0u64;
    for y in 0..h as i64 {
        for x in 0..w as i64 {
            let (nx, ny) = (x + dx, y + dy);
            if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                continue;
            }
            let (x, y, nx, ny) = (x as usize, y as usize, nx as usize, ny as usize);
            if !bit(x, y) || !bit(nx, ny) {
                continue;
            }
            let a = quant(img.get(x, y));
            let b = quant(img.get(nx, ny));
            pair_counts[a * q + b] += 1;
            pair_counts[b * q + a] += 1;
            pairs += 2;
        }
    }
    if pairs == 0 {
        return None;
    }
    let prob = |i: usize, j: usize| pair_counts[i * q + j] as f64 / pairs as f64;

    let mut marginal = vec![0.0f64; q];
    for i in 0..q {
        for j in 0..q {
            marginal[i] += prob(i, j);
        }
    }
    let mu: f64 = marginal.iter().enumerate().map(|(i, &p)| i as f64 * p).sum();
    let sigma_sq: f64 = marginal
        .iter()
        .enumerate()
        .map(|(i, &p)| (i as f64 - mu).powi(2) * p)
        .sum();
    let mut contrast = 0.0;
    let mut cross = 0.0;
    let mut energy = 0.0;
    let mut homogeneity = 0.0;
    let mut idm = 0.0;
    for i in 0..q {
        for j in 0..q {
            let p = prob(i, j);
            let d = i as f64 - j as f64;
            contrast += d * d * p;
            cross += (i as f64 - mu) * (j as f64 - mu) * p;
            energy += p * p;
            homogeneity += p / (1.0 + d.abs());
            idm += p / (1.0 + d * d);
        }
    }
    let correlation = if sigma_sq == 0.0 { 1.0 } else { cross / sigma_sq };

    Some([
        white as f64,
        area as f64,
        perimeter as f64,
        contrast,
        correlation,
        energy,
        homogeneity,
        mean,
        std,
        entropy,
        rms,
        variance,
        smoothness,
        kurtosis,
        skewness,
        idm,
    ])
}

/// `|a - b| <= tol * max(1, |a|, |b|)` — the comparison the oracles use.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

// ---------------------------------------------------------------------------
// Exhaustive dual-QP oracle
// ---------------------------------------------------------------------------

/// Exact optimum of the soft-margin SVM dual
/// `max Σα − ½ ΣΣ αᵢαⱼyᵢyⱼ⟨xᵢ,xⱼ⟩` s.t. `Σyα = 0`, `0 ≤ α ≤ C`,
/// found by enumerating every {zero, free, at-C} pattern of the dual
/// variables and solving the free ones from the stationarity conditions.
/// Every candidate evaluated is feasible, so the running maximum can never
/// exceed the true optimum, and the optimum's own pattern is among the
/// candidates. Practical for n ≤ 6 (3^6 = 729 patterns).
pub fn qp_dual_optimum(x: &[[f64; FEATURE_DIM]], y: &[f64], c: f64) -> f64 {
    let n = x.len();
    assert!(n <= 6, "pattern enumeration is exponential in n");
    let mut gram = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            gram[i * n + j] = (0..FEATURE_DIM).map(|d| x[i][d] * x[j][d]).sum();
        }
    }
    let k = |i: usize, j: usize| gram[i * n + j];

    let objective = |alpha: &[f64]| {
        let linear: f64 = alpha.iter().sum();
        let mut quad = 0.0;
        for i in 0..n {
            for j in 0..n {
                quad += alpha[i] * alpha[j] * y[i] * y[j] * k(i, j);
            }
        }
        linear - 0.5 * quad
    };

    let mut best = f64::NEG_INFINITY;
    let patterns = 3usize.pow(n as u32);
    for code in 0..patterns {
        // Digit 0: α = 0; digit 1: free; digit 2: α = C.
        let mut digits = [0u8; 6];
        let mut rest = code;
        for d in digits.iter_mut().take(n) {
            *d = (rest % 3) as u8;
            rest /= 3;
        }
        let free: Vec<usize> = (0..n).filter(|&i| digits[i] == 1).collect();
        let mut alpha = vec![0.0f64; n];
        for i in 0..n {
            if digits[i] == 2 {
                alpha[i] = c;
            }
        }

        if free.is_empty() {
            let balance: f64 = (0..n).map(|i| y[i] * alpha[i]).sum();
            if balance.abs() <= 1e-9 * (1.0 + c * n as f64) {
                best = best.max(objective(&alpha));
            }
            continue;
        }

        // Stationarity for each free i:
        //   Σ_{j free} yᵢyⱼK(i,j)·αⱼ + yᵢ·β = 1 − C·Σ_{j at C} yᵢyⱼK(i,j)
        // plus the balance constraint Σ_{j free} yⱼαⱼ = −C·Σ_{j at C} yⱼ.
        let m = free.len() + 1;
        let mut a = vec![vec![0.0f64; m]; m];
        let mut b = vec![0.0f64; m];
        for (row, &i) in free.iter().enumerate() {
            for (col, &j) in free.iter().enumerate() {
                a[row][col] = y[i] * y[j] * k(i, j);
            }
            a[row][free.len()] = y[i];
            let fixed: f64 = (0..n)
                .filter(|&j| digits[j] == 2)
                .map(|j| y[i] * y[j] * k(i, j))
                .sum();
            b[row] = 1.0 - c * fixed;
        }
        for (col, &j) in free.iter().enumerate() {
            a[free.len()][col] = y[j];
        }
        let fixed_balance: f64 = (0..n).filter(|&j| digits[j] == 2).map(|j| y[j]).sum();
        b[free.len()] = -c * fixed_balance;

        let Some(solution) = solve_linear(a, b) else {
            continue;
        };
        let mut feasible = true;
        for (slot, &i) in free.iter().enumerate() {
            let v = solution[slot];
            if !v.is_finite() || v < -1e-9 || v > c + 1e-9 {
                feasible = false;
                break;
            }
            alpha[i] = v.clamp(0.0, c);
        }
        if feasible {
            best = best.max(objective(&alpha));
        }
    }
    best
}

/// Gaussian elimination with partial pivoting; `None` on a singular system.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let m = b.len();
    let scale: f64 = a
        .iter()
        .flat_map(|row| row.iter().map(|v| v.abs()))
        .fold(1.0, f64::max);
    for col in 0..m {
        let pivot = (col..m).max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))?;
        if a[pivot][col].abs() < 1e-10 * scale {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..m {
            let factor = a[row][col] / a[col][col];
            for c2 in col..m {
                a[row][c2] -= factor * a[col][c2];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0f64; m];
    for row in (0..m).rev() {
        let mut sum = b[row];
        for col in row + 1..m {
            sum -= a[row][col] * x[col];
        }
        x[row] = sum / a[row][row];
    }
    Some(x)
}

// ---------------------------------------------------------------------------
// Binary and filesystem helpers
// ---------------------------------------------------------------------------

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the `mrgrade` binary with the given arguments and captures the
/// result. Panics only if the process cannot be spawned at all.
pub fn mrgrade<I, S>(args: I) -> Run
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let out = Command::new(env!("CARGO_BIN_EXE_mrgrade"))
        .args(args)
        .output()
        .expect("mrgrade binary spawns");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn p(path: &Path) -> &str {
    path.to_str().expect("temp paths are valid UTF-8")
}

/// Writes each image as `<prefix>_<index>.pgm` (zero-padded, so name order
/// equals index order) and returns the paths.
pub fn write_images(dir: &Path, prefix: &str, images: &[GrayImage]) -> Vec<PathBuf> {
    images
        .iter()
        .enumerate()
        .map(|(i, img)| {
            let path = dir.join(format!("{prefix}_{i:04}.pgm"));
            save_image(img, &path).expect("temp dir is writable");
            path
        })
        .collect()
}

/// Splits CSV text into trimmed cells, skipping blank lines.
pub fn csv_cells(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(|c| c.trim().to_string()).collect())
        .collect()
}
