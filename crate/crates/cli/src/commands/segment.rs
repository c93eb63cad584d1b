//! `mrgrade segment` — cluster gray levels and write the region artifacts.
//!
//! Three images come out of a run: the label-map visualization (each pixel
//! painted with its cluster centroid), the region-of-interest mask (the
//! largest connected component of the selected cluster), and the input
//! with the region boundary drawn in white. Default names derive from the
//! input stem inside `--out-dir`; each path can be overridden individually.

use std::path::Path;

use mrgrade_core::imgcore::save_image;

use crate::config::PipelineConfig;
use crate::errors::CliError;
use crate::stages;
use crate::SegmentFlags;

pub fn run(
    input: &Path,
    flags: &SegmentFlags,
    out_dir: &Path,
    labels_out: Option<&Path>,
    mask_out: Option<&Path>,
    outline_out: Option<&Path>,
) -> Result<(), CliError> {
    let mut cfg = PipelineConfig::default();
    cfg.apply_flags(&Default::default(), flags, &Default::default())?;
    cfg.validate()?;

    let img = stages::load(input)?;
    let (labels, mask) = stages::run_segment(&img, &cfg)?;
    let outlined = stages::run_outline(&img, &mask)?;

    let stem = stages::stem_of(input);
    if labels_out.is_none() || mask_out.is_none() || outline_out.is_none() {
        stages::ensure_dir(out_dir)?;
    }
    let labels_path = labels_out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| stages::artifact(out_dir, &stem, "labels.pgm"));
    let mask_path = mask_out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| stages::artifact(out_dir, &stem, "mask.pgm"));
    let outline_path = outline_out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| stages::artifact(out_dir, &stem, "outline.pgm"));

    save_image(&labels.visualization(), &labels_path)?;
    save_image(&mask.to_image(), &mask_path)?;
    save_image(&outlined, &outline_path)?;

    // Per-cluster summary on stdout; run diagnostics on stderr.
    let mut pixels = vec![0u64; labels.k()];
    for &l in labels.labels() {
        pixels[l as usize] += 1;
    }
    println!("cluster,centroid,pixels");
    for (i, &c) in labels.centroids().iter().enumerate() {
        println!("{i},{c},{}", pixels[i]);
    }
    eprintln!(
        "segmented {}: clusters={} iterations={} converged={} region_pixels={}",
        input.display(),
        labels.k(),
        labels.iterations(),
        labels.converged(),
        mask.count_set()
    );
    Ok(())
}
