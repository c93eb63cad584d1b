//! `mrgrade` — MRI enhancement, segmentation, and grading from the shell.
//!
//! Every stage of the pipeline is its own subcommand (`enhance`, `metrics`,
//! `segment`, `features`, `train`, `classify`) and `pipeline` chains them
//! end to end over a batch of images. All tabular output is CSV with fixed
//! headers; logs and warnings go to the error stream.
//!
//! Exit codes are uniform across subcommands:
//! * `0` — success
//! * `1` — I/O failure: missing, unreadable, unwritable, or undecodable
//!   files (images, CSVs, model files)
//! * `2` — invalid arguments or contract violation: parameters out of
//!   range, incompatible inputs (for example mismatched dimensions), or
//!   data that is well-formed but unusable (single-class training sets,
//!   empty masks, more clusters than gray levels)

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

mod commands;
mod config;
mod errors;
mod stages;

use errors::CliError;

const EXIT_CODE_HELP: &str = "Exit codes: 0 success, 1 I/O failure, 2 invalid arguments or contract violation.";

#[derive(Parser)]
#[command(
    name = "mrgrade",
    version,
    about = "MRI contrast enhancement, tumor segmentation, and grading toolkit",
    after_help = EXIT_CODE_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enhance one image with a histogram-equalization method
    #[command(after_help = EXIT_CODE_HELP)]
    Enhance(EnhanceCmd),
    /// Report quality metrics (MSE, PSNR, AMBE, operation counts)
    #[command(after_help = EXIT_CODE_HELP)]
    Metrics(MetricsCmd),
    /// Cluster gray levels and extract the region of interest
    #[command(after_help = EXIT_CODE_HELP)]
    Segment(SegmentCmd),
    /// Compute the 16-value feature vector of a masked region
    #[command(after_help = EXIT_CODE_HELP)]
    Features(FeaturesCmd),
    /// Train the benign/malignant classifier from a labeled feature CSV
    #[command(after_help = EXIT_CODE_HELP)]
    Train(TrainCmd),
    /// Grade feature vectors or images with a trained model
    #[command(after_help = EXIT_CODE_HELP)]
    Classify(ClassifyCmd),
    /// Run enhance, segment, features, and classify over a batch of images
    #[command(after_help = EXIT_CODE_HELP)]
    Pipeline(PipelineCmd),
}

/// Flags shared by every command that runs an equalizer.
#[derive(Args, Debug, Clone, Default)]
pub struct EnhanceFlags {
    /// Equalization method: he, bbhe, rmshe, or dhe
    #[arg(long)]
    pub method: Option<String>,
    /// Recursion depth for rmshe (0-7)
    #[arg(long = "r")]
    pub r: Option<u32>,
    /// Dominating-partition threshold factor for dhe
    #[arg(long)]
    pub spread_factor: Option<f64>,
    /// Minimum sub-histogram width for dhe re-splits
    #[arg(long)]
    pub min_partition_width: Option<u8>,
    /// Weight dhe output ranges by population instead of span (true/false)
    #[arg(long)]
    pub population_weighted: Option<bool>,
}

/// Flags shared by every command that clusters an image.
#[derive(Args, Debug, Clone, Default)]
pub struct SegmentFlags {
    /// Number of gray-level clusters
    #[arg(long)]
    pub k: Option<usize>,
    /// Sweep budget for the clustering loop
    #[arg(long)]
    pub max_iter: Option<u32>,
    /// Convergence tolerance on centroid movement
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for random centroid initialization (omit for evenly spaced)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Region-of-interest cluster: "brightest" or "index:N"
    #[arg(long)]
    pub roi: Option<String>,
    /// Pixel connectivity for component analysis: 4 or 8
    #[arg(long)]
    pub connectivity: Option<u32>,
}

/// Flags shared by every command that extracts features.
#[derive(Args, Debug, Clone, Default)]
pub struct FeatureFlags {
    /// Co-occurrence quantization bins (2-256)
    #[arg(long)]
    pub glcm_levels: Option<usize>,
    /// Co-occurrence displacement as "DY,DX"
    #[arg(long)]
    pub glcm_offset: Option<String>,
    /// Report raw gray-level variance instead of normalized (true/false)
    #[arg(long)]
    pub raw_variance: Option<bool>,
}

#[derive(Args)]
struct EnhanceCmd {
    /// Input image (PGM or grayscale PNG)
    input: PathBuf,
    #[command(flatten)]
    enhance: EnhanceFlags,
    /// Where to write the enhanced image
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct MetricsCmd {
    /// Input image, or a directory of images for batch comparison
    input: PathBuf,
    /// Already-processed images to score against the input; when omitted,
    /// all four equalizers are run and scored
    processed: Vec<PathBuf>,
    #[command(flatten)]
    enhance: EnhanceFlags,
    /// Write the CSV report here instead of standard output
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SegmentCmd {
    /// Input image
    input: PathBuf,
    #[command(flatten)]
    segment: SegmentFlags,
    /// Directory for the three output images
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Override path for the label-map visualization
    #[arg(long)]
    labels_out: Option<PathBuf>,
    /// Override path for the region-of-interest mask
    #[arg(long)]
    mask_out: Option<PathBuf>,
    /// Override path for the outlined image
    #[arg(long)]
    outline_out: Option<PathBuf>,
}

#[derive(Args)]
struct FeaturesCmd {
    /// Input image, or a directory of images for batch extraction
    input: PathBuf,
    /// Region mask image (nonzero pixels select the region)
    #[arg(long)]
    mask: Option<PathBuf>,
    #[command(flatten)]
    segment: SegmentFlags,
    #[command(flatten)]
    features: FeatureFlags,
    /// Write the CSV here instead of standard output
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TrainCmd {
    /// Labeled feature CSV (feature columns plus a "grade" column)
    data: PathBuf,
    /// Where to write the trained model
    #[arg(short, long)]
    output: PathBuf,
    /// Soft-margin penalty C
    #[arg(long)]
    c: Option<f64>,
    /// KKT tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Quiet full sweeps required before training stops
    #[arg(long)]
    max_passes: Option<u32>,
    /// Labeled CSV to evaluate the trained model on
    #[arg(long)]
    test: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyCmd {
    /// Trained model file
    #[arg(long)]
    model: PathBuf,
    /// Images to segment, featurize, and grade
    inputs: Vec<PathBuf>,
    /// Feature CSV to grade instead of images
    #[arg(long)]
    features: Option<PathBuf>,
    #[command(flatten)]
    segment: SegmentFlags,
    #[command(flatten)]
    feature_flags: FeatureFlags,
    /// Write the CSV here instead of standard output
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineCmd {
    /// Images (or directories of images) to process
    inputs: Vec<PathBuf>,
    /// Key=value configuration file; flags below override its values
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    enhance: EnhanceFlags,
    #[command(flatten)]
    segment: SegmentFlags,
    #[command(flatten)]
    features: FeatureFlags,
    /// Trained model for grading (omit to leave grades empty)
    #[arg(long)]
    model: Option<PathBuf>,
    /// Directory for per-image artifacts and the summary CSV
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Print the resolved configuration (file plus flag overrides) and exit
    #[arg(long)]
    print_config: bool,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Enhance(c) => commands::enhance::run(&c.input, &c.enhance, &c.output),
        Command::Metrics(c) => {
            commands::metrics::run(&c.input, &c.processed, &c.enhance, c.output.as_deref())
        }
        Command::Segment(c) => commands::segment::run(
            &c.input,
            &c.segment,
            &c.out_dir,
            c.labels_out.as_deref(),
            c.mask_out.as_deref(),
            c.outline_out.as_deref(),
        ),
        Command::Features(c) => commands::features::run(
            &c.input,
            c.mask.as_deref(),
            &c.segment,
            &c.features,
            c.output.as_deref(),
        ),
        Command::Train(c) => commands::train::run(
            &c.data,
            &c.output,
            c.c,
            c.tol,
            c.max_passes,
            c.test.as_deref(),
        ),
        Command::Classify(c) => commands::classify::run(
            &c.model,
            &c.inputs,
            c.features.as_deref(),
            &c.segment,
            &c.feature_flags,
            c.output.as_deref(),
        ),
        Command::Pipeline(c) => commands::pipeline::run(
            &c.inputs,
            c.config.as_deref(),
            &c.enhance,
            &c.segment,
            &c.features,
            c.model.as_deref(),
            c.out_dir.as_deref(),
            c.print_config,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}
