//! `mrgrade pipeline` — the full chain over a batch of images.
//!
//! Per image: enhance, cluster the enhanced image, take the region of
//! interest, outline it, extract features, and grade (when a model is
//! configured). Artifacts land in the output directory as
//! `<stem>_enhanced.pgm`, `<stem>_labels.pgm`, `<stem>_mask.pgm`,
//! `<stem>_outline.pgm`, and `<stem>_features.csv`, plus one `summary.csv`
//! for the whole run, rows ordered by input file name.
//!
//! A failing image is logged and skipped so one corrupt scan cannot sink a
//! corpus run; the exit status still reports the failure. Configuration
//! problems, by contrast, abort before any image is opened.
//!
//! Every artifact is byte-identical to what the corresponding single-stage
//! command produces with the same parameters — the pipeline is wiring, not
//! a different computation.

use std::path::{Path, PathBuf};

use mrgrade_core::classify::SvmModel;
use mrgrade_core::features::FeatureVector;
use mrgrade_core::imgcore::save_image;

use crate::config::{self, PipelineConfig};
use crate::errors::CliError;
use crate::stages;
use crate::{EnhanceFlags, FeatureFlags, SegmentFlags};

#[allow(clippy::too_many_arguments)]
pub fn run(
    inputs: &[PathBuf],
    config_path: Option<&Path>,
    enhance_flags: &EnhanceFlags,
    segment_flags: &SegmentFlags,
    feature_flags: &FeatureFlags,
    model_flag: Option<&Path>,
    out_dir_flag: Option<&Path>,
    print_config: bool,
) -> Result<(), CliError> {
    let mut cfg = config::resolve(config_path, enhance_flags, segment_flags, feature_flags)?;
    if let Some(model) = model_flag {
        cfg.model = Some(model.to_path_buf());
    }
    if let Some(dir) = out_dir_flag {
        cfg.output_dir = dir.to_path_buf();
    }

    // Everything that can be checked without pixel data is checked now;
    // a bad configuration must not half-process a corpus.
    cfg.validate()?;
    if print_config {
        // Lossless: feeding the printed text back via --config reproduces
        // this exact run.
        print!("{}", cfg.to_text());
        return Ok(());
    }
    let model = cfg.model.as_deref().map(SvmModel::load).transpose()?;
    let files = stages::expand_inputs(inputs)?;
    stages::ensure_dir(&cfg.output_dir)?;

    let mut summary = format!("image,{},grade,decision_value\n", FeatureVector::csv_header());
    let mut failures = 0usize;
    for file in &files {
        let name = file
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        match process_one(file, &cfg, model.as_ref()) {
            Ok((fv, grade, decision)) => {
                println!("ok {name} grade={}", if grade.is_empty() { "-" } else { &grade });
                summary.push_str(&format!("{name},{},{grade},{decision}\n", fv.csv_row()));
            }
            Err(err) => {
                failures += 1;
                println!("failed {name}: {err}");
            }
        }
    }

    let summary_path = cfg.output_dir.join("summary.csv");
    std::fs::write(&summary_path, summary)
        .map_err(|e| CliError::io(format!("failed to write {}: {e}", summary_path.display())))?;

    if failures > 0 {
        return Err(CliError::io(format!(
            "{failures} of {} images failed",
            files.len()
        )));
    }
    Ok(())
}

/// All stages for one image; any error skips the image, not the run.
fn process_one(
    file: &Path,
    cfg: &PipelineConfig,
    model: Option<&SvmModel>,
) -> Result<(FeatureVector, String, String), CliError> {
    let stem = stages::stem_of(file);
    let dir = &cfg.output_dir;

    let img = stages::load(file)?;
    let (enhanced, _ops) = stages::run_enhance(&img, cfg)?;
    save_image(&enhanced, stages::artifact(dir, &stem, "enhanced.pgm"))?;

    let (labels, region) = stages::run_segment(&enhanced, cfg)?;
    save_image(
        &labels.visualization(),
        stages::artifact(dir, &stem, "labels.pgm"),
    )?;
    save_image(&region.to_image(), stages::artifact(dir, &stem, "mask.pgm"))?;
    let outlined = stages::run_outline(&enhanced, &region)?;
    save_image(&outlined, stages::artifact(dir, &stem, "outline.pgm"))?;

    let fv = stages::run_features(&enhanced, &region, cfg)?;
    let features_path = stages::artifact(dir, &stem, "features.csv");
    std::fs::write(
        &features_path,
        format!("{}\n{}\n", FeatureVector::csv_header(), fv.csv_row()),
    )
    .map_err(|e| CliError::io(format!("failed to write {}: {e}", features_path.display())))?;

    let (grade, decision) = match model {
        Some(m) => {
            let (grade, decision) = m.classify(&fv)?;
            (grade.to_string(), decision.to_string())
        }
        None => (String::new(), String::new()),
    };
    Ok((fv, grade, decision))
}
