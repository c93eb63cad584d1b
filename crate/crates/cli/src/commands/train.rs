//! `mrgrade train` — fit the benign/malignant classifier.
//!
//! Reads a labeled feature CSV (the feature columns plus a trailing
//! `grade` column), trains, writes the model file, and prints key=value
//! result lines. With `--test` the model is also scored on a held-out
//! labeled CSV; a training set that is not strictly larger than the test
//! set draws a warning, since grading quality claims need more training
//! evidence than test evidence.

use std::path::Path;

use mrgrade_core::classify::{
    accuracy, svm_train, TrainingSet, DEFAULT_C, DEFAULT_MAX_PASSES, DEFAULT_TOL,
};

use crate::errors::CliError;

fn load_set(path: &Path) -> Result<TrainingSet, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("failed to read {}: {e}", path.display())))?;
    Ok(TrainingSet::from_csv(&text)?)
}

pub fn run(
    data: &Path,
    output: &Path,
    c: Option<f64>,
    tol: Option<f64>,
    max_passes: Option<u32>,
    test: Option<&Path>,
) -> Result<(), CliError> {
    let c = c.unwrap_or(DEFAULT_C);
    let tol = tol.unwrap_or(DEFAULT_TOL);
    let max_passes = max_passes.unwrap_or(DEFAULT_MAX_PASSES);

    let training = load_set(data)?;
    let held_out = test.map(load_set).transpose()?;
    if let Some(t) = &held_out {
        if training.len() <= t.len() {
            eprintln!(
                "warning: training rows ({}) should exceed test rows ({})",
                training.len(),
                t.len()
            );
        }
    }

    let model = svm_train(&training, c, tol, max_passes)?;
    model.save(output)?;

    println!("training_rows={}", training.len());
    println!("support_count={}", model.support_count());
    println!("training_accuracy={}", accuracy(&model, training.rows()));
    if let Some(t) = &held_out {
        println!("test_rows={}", t.len());
        println!("test_accuracy={}", accuracy(&model, t.rows()));
    }
    println!("model={}", output.display());
    Ok(())
}
