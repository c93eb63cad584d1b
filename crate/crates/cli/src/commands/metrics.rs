//! `mrgrade metrics` — quality comparison tables.
//!
//! Three shapes of run:
//! * file input, no processed images: run all four equalizers and print one
//!   row per method;
//! * file input plus processed images: score each processed image against
//!   the input (operation counts read as zero — the work happened
//!   elsewhere);
//! * directory input: the four-method comparison per contained image, with
//!   a leading `image` column, ordered by file name.

use std::path::{Path, PathBuf};

use mrgrade_core::enhance::OpCount;
use mrgrade_core::quality::{self, compare_methods, QualityReport};

use crate::config::PipelineConfig;
use crate::errors::CliError;
use crate::stages;
use crate::EnhanceFlags;

pub fn run(
    input: &Path,
    processed: &[PathBuf],
    flags: &EnhanceFlags,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let mut cfg = PipelineConfig::default();
    cfg.apply_flags(flags, &Default::default(), &Default::default())?;
    cfg.validate()?;

    let csv = if input.is_dir() {
        if !processed.is_empty() {
            return Err(CliError::usage(
                "a directory input compares the four methods per image; \
                 processed images cannot be combined with it",
            ));
        }
        let mut out = format!("image,{}\n", quality::CSV_HEADER);
        for file in stages::list_images(input)? {
            let img = stages::load(&file)?;
            let name = file
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            for (method, report) in compare_methods(&img, &cfg.enhance)? {
                out.push_str(&format!("{name},{}\n", quality::csv_row(&method, &report)));
            }
        }
        out
    } else {
        let img = stages::load(input)?;
        if processed.is_empty() {
            quality::reports_to_csv(&compare_methods(&img, &cfg.enhance)?)
        } else {
            let mut out = format!("{}\n", quality::CSV_HEADER);
            for path in processed {
                let other = stages::load(path)?;
                let report = QualityReport::measure(&img, &other, OpCount::default())?;
                out.push_str(&format!(
                    "{}\n",
                    quality::csv_row(&path.display().to_string(), &report)
                ));
            }
            out
        }
    };
    stages::emit(&csv, output)
}
