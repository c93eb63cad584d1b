//! Stage runners shared by the single-step commands and the pipeline.
//!
//! `pipeline` must produce byte-identical artifacts to a manual chain of
//! `enhance`, `segment`, and `features` runs with the same parameters, so
//! all four callers go through these functions rather than re-wiring the
//! library themselves.

use std::path::{Path, PathBuf};

use mrgrade_core::enhance::{EqualizerRegistry, OpCount};
use mrgrade_core::features::{extract_all, FeatureVector};
use mrgrade_core::imgcore::{load_image, GrayImage};
use mrgrade_core::segment::{
    extract_roi, kmeans_with_init, largest_component, outline, KmeansInit, LabelMap, RoiMask,
};

use crate::config::PipelineConfig;
use crate::errors::CliError;

/// Runs the configured equalizer, returning the output image and the
/// operation tally of the run.
pub fn run_enhance(img: &GrayImage, cfg: &PipelineConfig) -> Result<(GrayImage, OpCount), CliError> {
    let equalizer = EqualizerRegistry::builtin().build(&cfg.method, &cfg.enhance)?;
    let mut ops = OpCount::default();
    let enhanced = equalizer.equalize_counted(img, &mut ops)?;
    Ok((enhanced, ops))
}

/// Clustering plus region extraction: the label map, and the largest
/// connected component of the configured cluster.
pub fn run_segment(img: &GrayImage, cfg: &PipelineConfig) -> Result<(LabelMap, RoiMask), CliError> {
    let init = match cfg.seed {
        Some(seed) => KmeansInit::SeededRandom(seed),
        None => KmeansInit::EvenlySpaced,
    };
    let labels = kmeans_with_init(img, cfg.k, cfg.max_iter, cfg.tol, init)?;
    let roi = extract_roi(&labels, cfg.roi)?;
    let mask = largest_component(&roi, cfg.connectivity)?;
    Ok((labels, mask))
}

/// Feature extraction over the masked region of `img`.
pub fn run_features(
    img: &GrayImage,
    mask: &RoiMask,
    cfg: &PipelineConfig,
) -> Result<FeatureVector, CliError> {
    Ok(extract_all(img, mask, &cfg.features)?)
}

/// Outlines the mask boundary onto the image.
pub fn run_outline(img: &GrayImage, mask: &RoiMask) -> Result<GrayImage, CliError> {
    Ok(outline(img, mask)?)
}

/// The input's file name without its extension, used to derive artifact
/// names.
pub fn stem_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".to_string())
}

/// Canonical artifact path `<dir>/<stem>_<suffix>`.
pub fn artifact(dir: &Path, stem: &str, suffix: &str) -> PathBuf {
    dir.join(format!("{stem}_{suffix}"))
}

/// All images directly inside `dir` (by `.pgm`/`.png` extension,
/// case-insensitive), sorted by file name so batch output order never
/// depends on directory iteration order.
pub fn list_images(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| CliError::io(format!("failed to read directory {}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry
            .map_err(|e| CliError::io(format!("failed to read directory {}: {e}", dir.display())))?;
        let path = entry.path();
        if !path.is_file() {
            continue;
        }
        let ext = path
            .extension()
            .map(|e| e.to_string_lossy().to_ascii_lowercase());
        if matches!(ext.as_deref(), Some("pgm") | Some("png")) {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()).then_with(|| a.cmp(b)));
    if files.is_empty() {
        return Err(CliError::usage(format!(
            "no .pgm or .png images in {}",
            dir.display()
        )));
    }
    Ok(files)
}

/// Expands a mixed list of image files and directories into a flat image
/// list ordered by file name.
pub fn expand_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            files.extend(list_images(input)?);
        } else {
            files.push(input.clone());
        }
    }
    if files.is_empty() {
        return Err(CliError::usage("no input images given"));
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()).then_with(|| a.cmp(b)));
    Ok(files)
}

/// Loads an image, wrapping codec errors in the exit-code policy.
pub fn load(path: &Path) -> Result<GrayImage, CliError> {
    Ok(load_image(path)?)
}

/// Writes `text` to `path`, or to standard output when no path is given.
pub fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::io(format!("failed to write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Creates `dir` (and parents) if needed.
pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::io(format!("failed to create {}: {e}", dir.display())))
}
