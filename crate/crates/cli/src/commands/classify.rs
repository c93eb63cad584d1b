//! `mrgrade classify` — grade feature vectors or raw images.
//!
//! Inputs are either a feature CSV (as produced by `mrgrade features`,
//! with or without the leading `image` column) or images, which are
//! segmented and featurized on the fly with the usual clustering flags.
//! Images are graded as given — run them through `enhance` or use
//! `pipeline` when grading should see the enhanced intensities.

use std::path::{Path, PathBuf};

use mrgrade_core::classify::SvmModel;
use mrgrade_core::features::{FeatureVector, FEATURE_DIM};

use crate::config::PipelineConfig;
use crate::errors::CliError;
use crate::stages;
use crate::{FeatureFlags, SegmentFlags};

pub fn run(
    model_path: &Path,
    inputs: &[PathBuf],
    features_csv: Option<&Path>,
    seg_flags: &SegmentFlags,
    feat_flags: &FeatureFlags,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let model = SvmModel::load(model_path)?;

    let mut csv = String::from("input,grade,decision_value\n");
    match (features_csv, inputs.is_empty()) {
        (Some(_), false) => {
            return Err(CliError::usage(
                "choose one input source: images or --features",
            ));
        }
        (None, true) => {
            return Err(CliError::usage(
                "nothing to classify: give images or --features CSV",
            ));
        }
        (Some(path), true) => {
            for (name, fv) in read_feature_rows(path)? {
                let (grade, decision) = model.classify(&fv)?;
                csv.push_str(&format!("{name},{grade},{decision}\n"));
            }
        }
        (None, false) => {
            let mut cfg = PipelineConfig::default();
            cfg.apply_flags(&Default::default(), seg_flags, feat_flags)?;
            cfg.validate()?;
            for file in stages::expand_inputs(inputs)? {
                let img = stages::load(&file)?;
                let (_, region) = stages::run_segment(&img, &cfg)?;
                let fv = stages::run_features(&img, &region, &cfg)?;
                let (grade, decision) = model.classify(&fv)?;
                let name = file
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default();
                csv.push_str(&format!("{name},{grade},{decision}\n"));
            }
        }
    }
    stages::emit(&csv, output)
}

/// Parses a feature CSV into named rows. The header must match the feature
/// column list exactly, optionally preceded by an `image` column; rows
/// without a name are numbered from 1.
fn read_feature_rows(path: &Path) -> Result<Vec<(String, FeatureVector)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("failed to read {}: {e}", path.display())))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| CliError::io(format!("{}: empty feature CSV", path.display())))?;

    let feature_header = FeatureVector::csv_header();
    let named = if header == feature_header {
        false
    } else if header == format!("image,{feature_header}") {
        true
    } else {
        return Err(CliError::io(format!(
            "{}: unexpected feature CSV header {header:?}",
            path.display()
        )));
    };

    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        let expected = FEATURE_DIM + usize::from(named);
        if fields.len() != expected {
            return Err(CliError::io(format!(
                "{}: row {} has {} fields, expected {expected}",
                path.display(),
                i + 1,
                fields.len()
            )));
        }
        let (name, values) = if named {
            (fields[0].to_string(), &fields[1..])
        } else {
            ((i + 1).to_string(), &fields[..])
        };
        let mut array = [0.0f64; FEATURE_DIM];
        for (slot, field) in array.iter_mut().zip(values) {
            *slot = field.parse().map_err(|_| {
                CliError::io(format!(
                    "{}: row {} has unparseable value {field:?}",
                    path.display(),
                    i + 1
                ))
            })?;
        }
        rows.push((name, FeatureVector::from_array(array)));
    }
    Ok(rows)
}
