//! Flat key=value run configuration.
//!
//! One key per line, `#` starts a comment, blank lines are ignored.
//! Unknown keys, duplicate keys, and unparseable values are hard errors so
//! a typo never silently runs with a default. `to_text` emits every key in
//! a fixed order and `parse(to_text(c)) == c` holds for every valid
//! configuration (optional keys are simply omitted when unset).
//!
//! Keys and defaults:
//!
//! ```text
//! method = rmshe            # he | bbhe | rmshe | dhe
//! r = 2                     # rmshe recursion depth, 0..=7
//! spread_factor = 3         # dhe dominating-partition threshold, > 0
//! min_partition_width = 3   # dhe re-split width floor, >= 1
//! population_weighted = false  # dhe range allocation by population
//! k = 3                     # gray-level clusters, 1..=256
//! max_iter = 100            # clustering sweep budget, >= 1
//! tol = 0.25                # centroid-movement tolerance, finite >= 0
//! seed =                    # u64; empty/omitted = evenly spaced init
//! roi = brightest           # brightest | index:N (N < k)
//! connectivity = 8          # 4 | 8
//! glcm_levels = 8           # co-occurrence bins, 2..=256
//! glcm_offset = 0,1         # co-occurrence displacement DY,DX
//! raw_variance = false      # raw instead of normalized variance
//! model =                   # trained model path; empty = no grading
//! output_dir = out          # artifact directory
//! ```

use std::path::{Path, PathBuf};

use mrgrade_core::enhance::{EnhanceParams, EqualizerRegistry};
use mrgrade_core::features::FeatureParams;
use mrgrade_core::imgcore::LEVELS;
use mrgrade_core::segment::{Connectivity, RoiStrategy};

use crate::errors::CliError;
use crate::{EnhanceFlags, FeatureFlags, SegmentFlags};

/// Every knob of the end-to-end pipeline, also usable piecemeal by the
/// single-stage commands.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub method: String,
    pub enhance: EnhanceParams,
    pub k: usize,
    pub max_iter: u32,
    pub tol: f64,
    pub seed: Option<u64>,
    pub roi: RoiStrategy,
    pub connectivity: Connectivity,
    pub features: FeatureParams,
    pub model: Option<PathBuf>,
    pub output_dir: PathBuf,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            method: "rmshe".to_string(),
            enhance: EnhanceParams::default(),
            k: 3,
            max_iter: 100,
            tol: 0.25,
            seed: None,
            roi: RoiStrategy::BrightestCentroid,
            connectivity: Connectivity::Eight,
            features: FeatureParams::default(),
            model: None,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl PipelineConfig {
    /// Parses a key=value document on top of the defaults.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = PipelineConfig::default();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::usage(format!(
                    "config line {lineno}: expected key=value, got {line:?}"
                )));
            };
            let key = key.trim();
            let value = value.trim();
            if seen.iter().any(|s| s == key) {
                return Err(CliError::usage(format!(
                    "config line {lineno}: duplicate key {key:?}"
                )));
            }
            seen.push(key.to_string());
            cfg.set(key, value)
                .map_err(|msg| CliError::usage(format!("config line {lineno}: {msg}")))?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        // `seed` and `model` are optional and may be set to empty to mean
        // "unset"; every other key requires a value.
        if value.is_empty() && key != "seed" && key != "model" {
            return Err(format!("key {key:?} has no value"));
        }
        match key {
            "method" => self.method = value.to_string(),
            "r" => self.enhance.rmshe_depth = parse_num(key, value)?,
            "spread_factor" => self.enhance.dhe_spread_factor = parse_num(key, value)?,
            "min_partition_width" => {
                self.enhance.dhe_min_partition_width = parse_num(key, value)?
            }
            "population_weighted" => {
                self.enhance.dhe_population_weighted = parse_bool(key, value)?
            }
            "k" => self.k = parse_num(key, value)?,
            "max_iter" => self.max_iter = parse_num(key, value)?,
            "tol" => self.tol = parse_num(key, value)?,
            "seed" => {
                self.seed = if value.is_empty() {
                    None
                } else {
                    Some(parse_num(key, value)?)
                }
            }
            "roi" => self.roi = parse_roi(value)?,
            "connectivity" => self.connectivity = parse_connectivity(parse_num(key, value)?)?,
            "glcm_levels" => self.features.glcm_levels = parse_num(key, value)?,
            "glcm_offset" => self.features.glcm_offset = parse_offset(value)?,
            "raw_variance" => self.features.raw_variance = parse_bool(key, value)?,
            "model" => {
                self.model = if value.is_empty() {
                    None
                } else {
                    Some(PathBuf::from(value))
                }
            }
            "output_dir" => self.output_dir = PathBuf::from(value),
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    /// Serializes every key in a fixed order; parsing the result yields an
    /// equal configuration.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("method = {}\n", self.method));
        out.push_str(&format!("r = {}\n", self.enhance.rmshe_depth));
        out.push_str(&format!(
            "spread_factor = {}\n",
            self.enhance.dhe_spread_factor
        ));
        out.push_str(&format!(
            "min_partition_width = {}\n",
            self.enhance.dhe_min_partition_width
        ));
        out.push_str(&format!(
            "population_weighted = {}\n",
            self.enhance.dhe_population_weighted
        ));
        out.push_str(&format!("k = {}\n", self.k));
        out.push_str(&format!("max_iter = {}\n", self.max_iter));
        out.push_str(&format!("tol = {}\n", self.tol));
        if let Some(seed) = self.seed {
            out.push_str(&format!("seed = {seed}\n"));
        }
        out.push_str(&format!("roi = {}\n", format_roi(self.roi)));
        out.push_str(&format!(
            "connectivity = {}\n",
            match self.connectivity {
                Connectivity::Four => 4,
                Connectivity::Eight => 8,
            }
        ));
        out.push_str(&format!("glcm_levels = {}\n", self.features.glcm_levels));
        out.push_str(&format!(
            "glcm_offset = {},{}\n",
            self.features.glcm_offset.0, self.features.glcm_offset.1
        ));
        out.push_str(&format!("raw_variance = {}\n", self.features.raw_variance));
        if let Some(model) = &self.model {
            out.push_str(&format!("model = {}\n", model.display()));
        }
        out.push_str(&format!("output_dir = {}\n", self.output_dir.display()));
        out
    }

    /// Overlays any flag the user actually passed.
    pub fn apply_flags(
        &mut self,
        enhance: &EnhanceFlags,
        segment: &SegmentFlags,
        features: &FeatureFlags,
    ) -> Result<(), CliError> {
        if let Some(method) = &enhance.method {
            self.method = method.clone();
        }
        if let Some(r) = enhance.r {
            self.enhance.rmshe_depth = r;
        }
        if let Some(f) = enhance.spread_factor {
            self.enhance.dhe_spread_factor = f;
        }
        if let Some(w) = enhance.min_partition_width {
            self.enhance.dhe_min_partition_width = w;
        }
        if let Some(p) = enhance.population_weighted {
            self.enhance.dhe_population_weighted = p;
        }
        if let Some(k) = segment.k {
            self.k = k;
        }
        if let Some(m) = segment.max_iter {
            self.max_iter = m;
        }
        if let Some(t) = segment.tol {
            self.tol = t;
        }
        if let Some(s) = segment.seed {
            self.seed = Some(s);
        }
        if let Some(roi) = &segment.roi {
            self.roi = parse_roi(roi).map_err(CliError::usage)?;
        }
        if let Some(c) = segment.connectivity {
            self.connectivity = parse_connectivity(c).map_err(CliError::usage)?;
        }
        if let Some(q) = features.glcm_levels {
            self.features.glcm_levels = q;
        }
        if let Some(offset) = &features.glcm_offset {
            self.features.glcm_offset = parse_offset(offset).map_err(CliError::usage)?;
        }
        if let Some(raw) = features.raw_variance {
            self.features.raw_variance = raw;
        }
        Ok(())
    }

    /// Checks every parameter against the ranges its stage enforces, so a
    /// batch run can refuse a bad configuration before opening any image.
    pub fn validate(&self) -> Result<(), CliError> {
        EqualizerRegistry::builtin()
            .build(&self.method, &self.enhance)
            .map_err(|e| CliError::usage(e.to_string()))?;
        if self.k == 0 {
            return Err(CliError::usage("cluster count must be at least 1"));
        }
        if self.k > LEVELS {
            return Err(CliError::usage(format!(
                "cluster count {} exceeds the {LEVELS} representable gray levels",
                self.k
            )));
        }
        if self.max_iter == 0 {
            return Err(CliError::usage("iteration budget must be at least 1"));
        }
        if !self.tol.is_finite() || self.tol < 0.0 {
            return Err(CliError::usage(format!(
                "tolerance must be finite and non-negative, got {}",
                self.tol
            )));
        }
        if let RoiStrategy::ClusterIndex(i) = self.roi {
            if i >= self.k {
                return Err(CliError::usage(format!(
                    "roi cluster index {i} out of range for {} clusters",
                    self.k
                )));
            }
        }
        if self.features.glcm_levels < 2 || self.features.glcm_levels > LEVELS {
            return Err(CliError::usage(format!(
                "glcm_levels must be within 2..=256, got {}",
                self.features.glcm_levels
            )));
        }
        if self.features.glcm_offset == (0, 0) {
            return Err(CliError::usage("glcm_offset must not be 0,0"));
        }
        Ok(())
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("key {key:?}: cannot parse {value:?}"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("key {key:?}: expected true or false, got {value:?}")),
    }
}

/// Parses "brightest" or "index:N".
pub fn parse_roi(value: &str) -> Result<RoiStrategy, String> {
    if value == "brightest" {
        return Ok(RoiStrategy::BrightestCentroid);
    }
    if let Some(n) = value.strip_prefix("index:") {
        let i = n
            .parse()
            .map_err(|_| format!("roi index {n:?} is not a number"))?;
        return Ok(RoiStrategy::ClusterIndex(i));
    }
    Err(format!(
        "roi must be \"brightest\" or \"index:N\", got {value:?}"
    ))
}

fn format_roi(roi: RoiStrategy) -> String {
    match roi {
        RoiStrategy::BrightestCentroid => "brightest".to_string(),
        RoiStrategy::ClusterIndex(i) => format!("index:{i}"),
    }
}

pub fn parse_connectivity(value: u32) -> Result<Connectivity, String> {
    match value {
        4 => Ok(Connectivity::Four),
        8 => Ok(Connectivity::Eight),
        _ => Err(format!("connectivity must be 4 or 8, got {value}")),
    }
}

/// Parses a "DY,DX" displacement; either component may be negative.
pub fn parse_offset(value: &str) -> Result<(i32, i32), String> {
    let Some((dy, dx)) = value.split_once(',') else {
        return Err(format!("offset must be \"DY,DX\", got {value:?}"));
    };
    let dy = dy
        .trim()
        .parse()
        .map_err(|_| format!("offset row component {dy:?} is not a number"))?;
    let dx = dx
        .trim()
        .parse()
        .map_err(|_| format!("offset column component {dx:?} is not a number"))?;
    Ok((dy, dx))
}

/// Loads, parses, and overlays flags; `path == None` starts from defaults.
pub fn resolve(
    path: Option<&Path>,
    enhance: &EnhanceFlags,
    segment: &SegmentFlags,
    features: &FeatureFlags,
) -> Result<PipelineConfig, CliError> {
    let mut cfg = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::io(format!("failed to read {}: {e}", p.display())))?;
            PipelineConfig::parse(&text)?
        }
        None => PipelineConfig::default(),
    };
    cfg.apply_flags(enhance, segment, features)?;
    Ok(cfg)
}
