//! Model persistence: a versioned line-based text format.
//!
//! Numbers are written with 17 significant digits, which round-trips every
//! f64 exactly, so a saved and reloaded model produces bit-identical
//! decision values.

use std::fs;
use std::path::Path;

use super::scaler::Scaler;
use super::smo::SvmModel;
use super::ClassifyError;
use crate::features::FEATURE_DIM;

const FORMAT_TAG: &str = "mrgrade-svm-model";
const FORMAT_VERSION: &str = "v1";

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_row(values: &[f64; FEATURE_DIM]) -> String {
    values.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(" ")
}

impl SvmModel {
    /// Writes the model as a versioned text document.
    pub fn save(&self, path: &Path) -> Result<(), ClassifyError> {
        let mut out = String::new();
        out.push_str(&format!("{FORMAT_TAG} {FORMAT_VERSION}\n"));
        out.push_str(&format!("c {}\n", fmt_f64(self.c)));
        out.push_str(&format!("tol {}\n", fmt_f64(self.tol)));
        out.push_str(&format!("support_count {}\n", self.support_count));
        let dropped: Vec<String> = self
            .scaler
            .dropped_columns()
            .iter()
            .map(usize::to_string)
            .collect();
        if dropped.is_empty() {
            out.push_str("dropped\n");
        } else {
            out.push_str(&format!("dropped {}\n", dropped.join(" ")));
        }
        out.push_str(&format!("means {}\n", fmt_row(self.scaler.means())));
        out.push_str(&format!("stds {}\n", fmt_row(self.scaler.stds())));
        out.push_str(&format!("weights {}\n", fmt_row(&self.weights)));
        out.push_str(&format!("bias {}\n", fmt_f64(self.bias)));
        fs::write(path, out).map_err(|source| ClassifyError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Reads a model written by [`save`](Self::save).
    pub fn load(path: &Path) -> Result<Self, ClassifyError> {
        let text = fs::read_to_string(path).map_err(|source| ClassifyError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    fn parse(text: &str) -> Result<Self, ClassifyError> {
        let malformed = |msg: &str| ClassifyError::MalformedModelFile(msg.to_string());
        let mut lines = text.lines();

        let header = lines.next().ok_or_else(|| malformed("empty file"))?;
        match header.split_once(' ') {
            Some((FORMAT_TAG, FORMAT_VERSION)) => {}
            Some((FORMAT_TAG, version)) => {
                return Err(ClassifyError::VersionMismatch(version.to_string()))
            }
            _ => return Err(malformed("missing format header")),
        }

        let mut field = |key: &str| -> Result<String, ClassifyError> {
            let line = lines
                .next()
                .ok_or_else(|| malformed(&format!("missing {key} line")))?;
            line.strip_prefix(key)
                .filter(|rest| rest.is_empty() || rest.starts_with(' '))
                .map(|rest| rest.trim().to_string())
                .ok_or_else(|| malformed(&format!("expected {key} line, got {line:?}")))
        };

        let parse_f64 = |s: &str, key: &str| -> Result<f64, ClassifyError> {
            let v: f64 = s
                .parse()
                .map_err(|_| malformed(&format!("{key}: {s:?} is not a number")))?;
            if !v.is_finite() {
                return Err(malformed(&format!("{key}: non-finite value {s:?}")));
            }
            Ok(v)
        };
        let parse_row = |s: &str, key: &str| -> Result<[f64; FEATURE_DIM], ClassifyError> {
            let parts: Vec<&str> = s.split_whitespace().collect();
            if parts.len() != FEATURE_DIM {
                return Err(malformed(&format!(
                    "{key}: expected {FEATURE_DIM} numbers, got {}",
                    parts.len()
                )));
            }
            let mut row = [0.0; FEATURE_DIM];
            for (slot, part) in row.iter_mut().zip(parts) {
                *slot = parse_f64(part, key)?;
            }
            Ok(row)
        };

        let c = parse_f64(&field("c")?, "c")?;
        let tol = parse_f64(&field("tol")?, "tol")?;
        let support_count: usize = {
            let s = field("support_count")?;
            s.parse()
                .map_err(|_| malformed(&format!("support_count: {s:?} is not a count")))?
        };
        let dropped_line = field("dropped")?;
        let mut dropped = [false; FEATURE_DIM];
        for part in dropped_line.split_whitespace() {
            let idx: usize = part
                .parse()
                .map_err(|_| malformed(&format!("dropped: {part:?} is not an index")))?;
            if idx >= FEATURE_DIM {
                return Err(malformed(&format!("dropped: index {idx} out of range")));
            }
            dropped[idx] = true;
        }
        let means = parse_row(&field("means")?, "means")?;
        let stds = parse_row(&field("stds")?, "stds")?;
        let weights = parse_row(&field("weights")?, "weights")?;
        let bias = parse_f64(&field("bias")?, "bias")?;

        for (i, &std) in stds.iter().enumerate() {
            if !dropped[i] && std <= 0.0 {
                return Err(malformed(&format!(
                    "stds: retained column {i} has non-positive spread {std}"
                )));
            }
        }

        Ok(SvmModel {
            weights,
            bias,
            scaler: Scaler::from_parts(means, stds, dropped),
            support_count,
            c,
            tol,
        })
    }
}
