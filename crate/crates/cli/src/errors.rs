//! Process exit-code policy.
//!
//! Two failure classes cover every subcommand: `Io` (exit 1) means a file
//! could not be read, written, or decoded — the request was fine, the
//! world was not. `Usage` (exit 2) means the request itself was invalid:
//! out-of-range parameters, incompatible inputs, or data that parses but
//! violates a documented contract.

use std::fmt;

use mrgrade_core::classify::ClassifyError;
use mrgrade_core::enhance::EnhanceError;
use mrgrade_core::features::FeatureError;
use mrgrade_core::imgcore::ImageError;
use mrgrade_core::quality::QualityError;
use mrgrade_core::segment::SegmentError;

#[derive(Debug)]
pub enum CliError {
    /// A file operation failed; exits with code 1.
    Io(String),
    /// The arguments or input contracts were violated; exits with code 2.
    Usage(String),
}

impl CliError {
    pub fn io(msg: impl Into<String>) -> Self {
        CliError::Io(msg.into())
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(msg) | CliError::Usage(msg) => f.write_str(msg),
        }
    }
}

impl From<ImageError> for CliError {
    fn from(err: ImageError) -> Self {
        // Everything the image codec can raise traces back to the file:
        // missing, unreadable, or not a supported grayscale image.
        CliError::Io(err.to_string())
    }
}

impl From<EnhanceError> for CliError {
    fn from(err: EnhanceError) -> Self {
        CliError::Usage(err.to_string())
    }
}

impl From<QualityError> for CliError {
    fn from(err: QualityError) -> Self {
        CliError::Usage(err.to_string())
    }
}

impl From<SegmentError> for CliError {
    fn from(err: SegmentError) -> Self {
        CliError::Usage(err.to_string())
    }
}

impl From<FeatureError> for CliError {
    fn from(err: FeatureError) -> Self {
        CliError::Usage(err.to_string())
    }
}

impl From<ClassifyError> for CliError {
    fn from(err: ClassifyError) -> Self {
        match err {
            // Broken files: unreadable, truncated, or the wrong format.
            ClassifyError::Io { .. }
            | ClassifyError::MalformedTrainingCsv(_)
            | ClassifyError::MalformedModelFile(_)
            | ClassifyError::VersionMismatch(_) => CliError::Io(err.to_string()),
            // Well-formed data that violates a training or input contract.
            _ => CliError::Usage(err.to_string()),
        }
    }
}
