//! `mrgrade features` — the 16-value feature vector of a masked region.
//!
//! The region comes either from an explicit mask image (`--mask`, nonzero
//! pixels select the region, used exactly as given) or from running the
//! clustering stage (`--k` and friends, region = largest component of the
//! selected cluster). Exactly one source must be chosen. A directory input
//! extracts per contained image — clustering parameters only, since one
//! mask file cannot describe many images — and prefixes an `image` column.

use std::path::Path;

use mrgrade_core::features::FeatureVector;
use mrgrade_core::segment::RoiMask;

use crate::config::PipelineConfig;
use crate::errors::CliError;
use crate::stages;
use crate::{FeatureFlags, SegmentFlags};

pub fn run(
    input: &Path,
    mask: Option<&Path>,
    seg_flags: &SegmentFlags,
    feat_flags: &FeatureFlags,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let mut cfg = PipelineConfig::default();
    cfg.apply_flags(&Default::default(), seg_flags, feat_flags)?;
    cfg.validate()?;

    let cluster_requested = seg_flags.k.is_some();
    if mask.is_some() && cluster_requested {
        return Err(CliError::usage(
            "choose one region source: --mask or clustering parameters (--k ...)",
        ));
    }

    let csv = if input.is_dir() {
        if mask.is_some() {
            return Err(CliError::usage(
                "a single --mask cannot describe a directory of images; use --k",
            ));
        }
        if !cluster_requested {
            return Err(CliError::usage(
                "batch extraction needs clustering parameters: pass --k",
            ));
        }
        let mut out = format!("image,{}\n", FeatureVector::csv_header());
        for file in stages::list_images(input)? {
            let img = stages::load(&file)?;
            let (_, region) = stages::run_segment(&img, &cfg)?;
            let fv = stages::run_features(&img, &region, &cfg)?;
            let name = file
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            out.push_str(&format!("{name},{}\n", fv.csv_row()));
        }
        out
    } else {
        let img = stages::load(input)?;
        let region = match mask {
            Some(path) => RoiMask::from_image(&stages::load(path)?),
            None => {
                if !cluster_requested {
                    return Err(CliError::usage(
                        "a region is required: pass --mask FILE or clustering \
                         parameters (--k ...)",
                    ));
                }
                stages::run_segment(&img, &cfg)?.1
            }
        };
        let fv = stages::run_features(&img, &region, &cfg)?;
        format!("{}\n{}\n", FeatureVector::csv_header(), fv.csv_row())
    };
    stages::emit(&csv, output)
}
