//! `mrgrade enhance` — equalize one image and score it against the input.

use std::path::Path;

use mrgrade_core::imgcore::save_image;
use mrgrade_core::quality::{self, QualityReport};

use crate::config::PipelineConfig;
use crate::errors::CliError;
use crate::stages;
use crate::EnhanceFlags;

pub fn run(input: &Path, flags: &EnhanceFlags, output: &Path) -> Result<(), CliError> {
    let mut cfg = PipelineConfig::default();
    cfg.apply_flags(flags, &Default::default(), &Default::default())?;
    cfg.validate()?;

    let img = stages::load(input)?;
    let (enhanced, ops) = stages::run_enhance(&img, &cfg)?;
    save_image(&enhanced, output)?;

    let report = QualityReport::measure(&img, &enhanced, ops)?;
    println!("{}", quality::CSV_HEADER);
    println!("{}", quality::csv_row(&cfg.method, &report));
    Ok(())
}
