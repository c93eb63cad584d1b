//! Histogram-equalization contrast enhancement.
//!
//! Four variants are provided, each as a strategy type implementing the
//! [`Equalizer`] trait:
//!
//! | name    | strategy                 | character                         |
//! |---------|--------------------------|-----------------------------------|
//! | `he`    | [`GlobalHistEq`]         | maximal stretch, shifts brightness|
//! | `bbhe`  | [`BiHistEq`]             | one mean split, keeps brightness  |
//! | `rmshe` | [`RecursiveMeanHistEq`]  | recursive mean splits             |
//! | `dhe`   | [`DynamicHistEq`]        | valley splits + span allocation   |
//!
//! Strategies are registered by name in an [`EqualizerRegistry`], so callers
//! (the command-line tool in particular) can select a method at runtime from
//! a configuration string. All variants are pure gray-level remappings: they
//! derive a 256-entry [`TransferFunction`] from the image histogram and
//! apply it pixel-wise, so output values depend only on input values, never
//! on pixel positions.

mod bbhe;
mod dhe;
mod he;
mod ops;
mod rmshe;
mod transfer;

pub use bbhe::BiHistEq;
pub use dhe::DynamicHistEq;
pub use he::GlobalHistEq;
pub use ops::OpCount;
pub use rmshe::{RecursiveMeanHistEq, MAX_RMSHE_DEPTH};
pub use transfer::{Segment, SubHistogramPartition, TransferFunction};

use crate::imgcore::{GrayImage, Histogram};

/// Canonical method names in presentation order.
pub const METHOD_NAMES: [&str; 4] = ["he", "bbhe", "rmshe", "dhe"];

/// Errors raised by equalizer construction or planning.
#[derive(Debug, thiserror::Error)]
pub enum EnhanceError {
    #[error("cannot equalize an empty histogram")]
    EmptyHistogram,
    #[error("recursion depth {0} exceeds the maximum of {MAX_RMSHE_DEPTH}")]
    InvalidDepth(u32),
    #[error("spread factor must be positive and finite, got {0}")]
    InvalidSpreadFactor(f64),
    #[error("minimum partition width must be at least 1, got {0}")]
    InvalidPartitionWidth(u8),
    #[error("unknown enhancement method '{0}'")]
    UnknownMethod(String),
}

/// Tunable parameters consumed by the equalizer factories.
///
/// Only the fields relevant to the selected method are read: `rmshe_depth`
/// configures `rmshe`, the `dhe_*` fields configure `dhe`, and `he`/`bbhe`
/// take no parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct EnhanceParams {
    pub rmshe_depth: u32,
    pub dhe_spread_factor: f64,
    pub dhe_min_partition_width: u8,
    pub dhe_population_weighted: bool,
}

impl Default for EnhanceParams {
    fn default() -> Self {
        Self {
            rmshe_depth: 2,
            dhe_spread_factor: 3.0,
            dhe_min_partition_width: 3,
            dhe_population_weighted: false,
        }
    }
}

/// A histogram-equalization strategy.
///
/// Implementors provide [`Equalizer::plan`], which derives the
/// sub-histogram partition from an image histogram; the transfer function,
/// image output, and instrumented variants all follow from it.
pub trait Equalizer: Send + Sync {
    /// Registry name of this strategy (e.g. `"bbhe"`).
    fn name(&self) -> &str;

    /// Derives the sub-histogram partition for `hist`, tallying counted
    /// arithmetic into `ops`.
    fn plan(
        &self,
        hist: &Histogram,
        ops: &mut OpCount,
    ) -> Result<SubHistogramPartition, EnhanceError>;

    /// The partition this strategy would use for `img`.
    fn partition(&self, img: &GrayImage) -> Result<SubHistogramPartition, EnhanceError> {
        self.plan(&Histogram::from_image(img), &mut OpCount::default())
    }

    /// Composite transfer function for `img`, with operation accounting.
    ///
    /// Applying the returned mapping pixel-wise reproduces
    /// [`Equalizer::equalize`] exactly.
    fn transfer_counted(
        &self,
        img: &GrayImage,
        ops: &mut OpCount,
    ) -> Result<TransferFunction, EnhanceError> {
        let hist = Histogram::from_image(img);
        ops.additions += img.pixel_count() as u64;
        let partition = self.plan(&hist, ops)?;
        Ok(transfer::compose(&hist, &partition, ops))
    }

    /// Composite transfer function for `img`.
    fn transfer(&self, img: &GrayImage) -> Result<TransferFunction, EnhanceError> {
        self.transfer_counted(img, &mut OpCount::default())
    }

    /// Equalizes `img`, tallying counted arithmetic into `ops`. The final
    /// pixel pass is a table lookup and contributes no operations.
    fn equalize_counted(
        &self,
        img: &GrayImage,
        ops: &mut OpCount,
    ) -> Result<GrayImage, EnhanceError> {
        Ok(self.transfer_counted(img, ops)?.apply(img))
    }

    /// Equalizes `img`.
    fn equalize(&self, img: &GrayImage) -> Result<GrayImage, EnhanceError> {
        self.equalize_counted(img, &mut OpCount::default())
    }
}

type Factory = Box<dyn Fn(&EnhanceParams) -> Result<Box<dyn Equalizer>, EnhanceError> + Send + Sync>;

/// Name-keyed registry of equalizer factories.
///
/// The four built-in methods are always available from
/// [`EqualizerRegistry::builtin`]; additional strategies can be registered
/// under new names and then selected with the same configuration machinery.
pub struct EqualizerRegistry {
    entries: Vec<(String, Factory)>,
}

impl EqualizerRegistry {
    /// An empty registry.
    #[must_use]
    pub fn empty() -> Self {
        Self {
            entries: Vec::new(),
        }
    }

    /// The registry of built-in methods: `he`, `bbhe`, `rmshe`, `dhe`.
    #[must_use]
    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register("he", |_| Ok(Box::new(GlobalHistEq)));
        reg.register("bbhe", |_| Ok(Box::new(BiHistEq)));
        reg.register("rmshe", |p| {
            Ok(Box::new(RecursiveMeanHistEq::new(p.rmshe_depth)?) as Box<dyn Equalizer>)
        });
        reg.register("dhe", |p| {
            Ok(Box::new(DynamicHistEq::new(
                p.dhe_spread_factor,
                p.dhe_min_partition_width,
                p.dhe_population_weighted,
            )?) as Box<dyn Equalizer>)
        });
        reg
    }

    /// Registers (or replaces) a factory under `name`.
    pub fn register(
        &mut self,
        name: &str,
        factory: impl Fn(&EnhanceParams) -> Result<Box<dyn Equalizer>, EnhanceError>
            + Send
            + Sync
            + 'static,
    ) {
        self.entries.retain(|(n, _)| n != name);
        self.entries.push((name.to_string(), Box::new(factory)));
    }

    /// Registered names, in registration order.
    #[must_use]
    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|(n, _)| n.as_str()).collect()
    }

    /// Builds the strategy registered under `name` with `params`.
    pub fn build(
        &self,
        name: &str,
        params: &EnhanceParams,
    ) -> Result<Box<dyn Equalizer>, EnhanceError> {
        let (_, factory) = self
            .entries
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| EnhanceError::UnknownMethod(name.to_string()))?;
        factory(params)
    }
}

/// Plain-equalization transfer function of a histogram:
/// `mapping[k] = round(255 * cdf(k))`.
///
/// Fails only for an empty histogram (no image produces one, but histograms
/// can be built directly).
pub fn he_transfer(hist: &Histogram) -> Result<TransferFunction, EnhanceError> {
    let partition = GlobalHistEq.plan(hist, &mut OpCount::default())?;
    Ok(transfer::compose(hist, &partition, &mut OpCount::default()))
}

/// Plain global histogram equalization.
#[must_use]
pub fn equalize_he(img: &GrayImage) -> GrayImage {
    GlobalHistEq
        .equalize(img)
        .expect("images are never empty")
}

/// Brightness-preserving bi-histogram equalization.
#[must_use]
pub fn equalize_bbhe(img: &GrayImage) -> GrayImage {
    BiHistEq.equalize(img).expect("images are never empty")
}

/// Recursive mean-split equalization with the given recursion depth.
pub fn equalize_rmshe(img: &GrayImage, depth: u32) -> Result<GrayImage, EnhanceError> {
    RecursiveMeanHistEq::new(depth)?.equalize(img)
}

/// Dynamic histogram equalization with span-weighted range allocation.
pub fn equalize_dhe(
    img: &GrayImage,
    spread_factor: f64,
    min_partition_width: u8,
) -> Result<GrayImage, EnhanceError> {
    DynamicHistEq::new(spread_factor, min_partition_width, false)?.equalize(img)
}

/// Composite transfer function of the named method for `img`.
pub fn transfer_of(
    method: &str,
    img: &GrayImage,
    params: &EnhanceParams,
) -> Result<TransferFunction, EnhanceError> {
    EqualizerRegistry::builtin().build(method, params)?.transfer(img)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lists_builtin_methods_in_order() {
        assert_eq!(EqualizerRegistry::builtin().names(), METHOD_NAMES);
    }

    #[test]
    fn registry_rejects_unknown_names() {
        let reg = EqualizerRegistry::builtin();
        assert!(matches!(
            reg.build("clahe", &EnhanceParams::default()),
            Err(EnhanceError::UnknownMethod(_))
        ));
    }

    #[test]
    fn registry_propagates_parameter_validation() {
        let reg = EqualizerRegistry::builtin();
        let params = EnhanceParams {
            rmshe_depth: 12,
            ..EnhanceParams::default()
        };
        assert!(matches!(
            reg.build("rmshe", &params),
            Err(EnhanceError::InvalidDepth(12))
        ));
    }

    #[test]
    fn registry_accepts_custom_strategies() {
        let mut reg = EqualizerRegistry::builtin();
        reg.register("identity", |_| {
            // A do-nothing strategy for testing extension.
            struct Identity;
            impl Equalizer for Identity {
                fn name(&self) -> &str {
                    "identity"
                }
                fn plan(
                    &self,
                    hist: &Histogram,
                    _ops: &mut OpCount,
                ) -> Result<SubHistogramPartition, EnhanceError> {
                    let (first, last) = hist
                        .occupied_bounds(0, 255)
                        .ok_or(EnhanceError::EmptyHistogram)?;
                    let population = (first..=last).map(|k| hist.count(k)).sum();
                    Ok(SubHistogramPartition::new(vec![Segment {
                        in_lo: first,
                        in_hi: last,
                        out_lo: first,
                        out_hi: last,
                        population,
                    }]))
                }
            }
            Ok(Box::new(Identity))
        });
        assert_eq!(reg.names().len(), 5);
        assert!(reg.build("identity", &EnhanceParams::default()).is_ok());
    }

    #[test]
    fn he_transfer_rejects_empty_histogram() {
        let hist = Histogram::from_counts([0; 256]);
        assert!(matches!(
            he_transfer(&hist),
            Err(EnhanceError::EmptyHistogram)
        ));
    }

    #[test]
    fn he_transfer_matches_strategy_route() {
        let img = GrayImage::from_fn(13, 11, |x, y| (x * 19 + y * 3) as u8);
        let hist = Histogram::from_image(&img);
        let free = he_transfer(&hist).unwrap();
        let strategy = GlobalHistEq.transfer(&img).unwrap();
        assert_eq!(free, strategy);
    }

    #[test]
    fn transfer_reproduces_equalizer_output() {
        let img = GrayImage::from_fn(17, 9, |x, y| (x * 23 + y * 5) as u8);
        let params = EnhanceParams::default();
        for name in METHOD_NAMES {
            let eq = EqualizerRegistry::builtin().build(name, &params).unwrap();
            let via_transfer = eq.transfer(&img).unwrap().apply(&img);
            let direct = eq.equalize(&img).unwrap();
            assert_eq!(via_transfer, direct, "method {name}");
        }
    }
}
