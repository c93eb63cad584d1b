//! Linear soft-margin SVM training by sequential minimal optimization.
//!
//! The solver works the dual problem over standardized features with a
//! linear kernel, keeping the primal weight vector incrementally updated
//! so decision values cost one dot product. Pair selection is
//! deterministic — the first KKT violator by index, partnered with the
//! point of maximum error gap (lower index on ties, then a sequential
//! fallback scan) — so training is bit-reproducible.

use super::scaler::Scaler;
use super::{ClassifyError, Grade, TrainingSet};
use crate::features::{FeatureVector, FEATURE_DIM};

/// Default box constraint.
pub const DEFAULT_C: f64 = 1.0;
/// Default KKT violation tolerance.
pub const DEFAULT_TOL: f64 = 1e-3;
/// Default number of consecutive violation-free sweeps that ends training.
pub const DEFAULT_MAX_PASSES: u32 = 10;

/// Safety cap on total sweeps; reached only on pathological data.
const MAX_SWEEPS: u32 = 100_000;

/// Minimum dual-variable step worth applying; smaller proposals are
/// numerical noise and are treated as "no progress".
const MIN_ALPHA_STEP: f64 = 1e-8;

/// A trained linear decision function `f(x) = w · standardize(x) + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub(crate) weights: [f64; FEATURE_DIM],
    pub(crate) bias: f64,
    pub(crate) scaler: Scaler,
    pub(crate) support_count: usize,
    pub(crate) c: f64,
    pub(crate) tol: f64,
}

impl SvmModel {
    /// Signed distance-like score of a feature vector; positive means
    /// Malignant.
    pub fn decision_value(&self, fv: &FeatureVector) -> Result<f64, ClassifyError> {
        let raw = fv.as_array();
        if let Some(column) = raw.iter().position(|v| !v.is_finite()) {
            return Err(ClassifyError::NonFiniteInput { column });
        }
        let x = self.scaler.transform(&raw);
        Ok(dot(&self.weights, &x) + self.bias)
    }

    /// Grades a feature vector, returning the decision value for audit.
    /// A decision value of exactly zero grades as Benign.
    pub fn classify(&self, fv: &FeatureVector) -> Result<(Grade, f64), ClassifyError> {
        let value = self.decision_value(fv)?;
        Ok((Grade::from_decision(value), value))
    }

    /// Weights over standardized features.
    pub fn weights(&self) -> &[f64; FEATURE_DIM] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn scaler(&self) -> &Scaler {
        &self.scaler
    }

    /// Number of training points with a nonzero dual variable.
    pub fn support_count(&self) -> usize {
        self.support_count
    }

    /// Box constraint the model was trained with.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// KKT tolerance the model was trained with.
    pub fn tol(&self) -> f64 {
        self.tol
    }
}

fn dot(a: &[f64; FEATURE_DIM], b: &[f64; FEATURE_DIM]) -> f64 {
    let mut s = 0.0;
    for d in 0..FEATURE_DIM {
        s += a[d] * b[d];
    }
    s
}

/// Solver state at the end of training, for audits and external
/// optimality checks. Dual variables are indexed like the training rows,
/// and the objective is the standard SVM dual
/// `Σα − ½ ΣΣ αᵢαⱼyᵢyⱼ⟨xᵢ,xⱼ⟩` over standardized features.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingDiagnostics {
    pub alphas: Vec<f64>,
    pub dual_objective: f64,
    pub sweeps: u32,
}

/// Trains a linear SVM on the standardized training set.
///
/// Training stops once `max_passes` consecutive full sweeps find no KKT
/// violation exceeding `tol` (so no update is applied), or at a generous
/// internal sweep cap. The dual objective is asserted non-decreasing
/// across every applied pair update.
pub fn svm_train(
    ts: &TrainingSet,
    c: f64,
    tol: f64,
    max_passes: u32,
) -> Result<SvmModel, ClassifyError> {
    svm_train_diagnostic(ts, c, tol, max_passes).map(|(model, _)| model)
}

/// [`svm_train`], also returning the final solver state.
pub fn svm_train_diagnostic(
    ts: &TrainingSet,
    c: f64,
    tol: f64,
    max_passes: u32,
) -> Result<(SvmModel, TrainingDiagnostics), ClassifyError> {
    if !c.is_finite() || c <= 0.0 {
        return Err(ClassifyError::InvalidHyperparameter(format!(
            "C must be positive, got {c}"
        )));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(ClassifyError::InvalidHyperparameter(format!(
            "tol must be positive, got {tol}"
        )));
    }
    if max_passes == 0 {
        return Err(ClassifyError::InvalidHyperparameter(
            "max_passes must be at least 1".into(),
        ));
    }

    let raw = ts.feature_matrix();
    let scaler = Scaler::fit(&raw);
    let x: Vec<[f64; FEATURE_DIM]> = raw.iter().map(|r| scaler.transform(r)).collect();
    let y: Vec<f64> = ts.rows().iter().map(|(_, g)| g.sign()).collect();
    let n = x.len();

    let mut gram = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            gram[i * n + j] = dot(&x[i], &x[j]);
        }
    }

    let mut state = Solver {
        x: &x,
        y: &y,
        gram: &gram,
        n,
        c,
        alpha: vec![0.0; n],
        w: [0.0; FEATURE_DIM],
        b: 0.0,
    };

    let mut objective = state.dual_objective();
    let mut quiet_sweeps = 0u32;
    let mut sweeps = 0u32;
    while quiet_sweeps < max_passes && sweeps < MAX_SWEEPS {
        let mut changed = 0usize;
        for i in 0..n {
            if !state.violates_kkt(i, tol) {
                continue;
            }
            let e_i = state.error(i);
            // Partner with the largest error gap; on a dead heat the lower
            // index wins, and if that pair makes no progress fall back to
            // a sequential scan.
            let mut best_j = None;
            let mut best_gap = -1.0;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let gap = (e_i - state.error(j)).abs();
                if gap > best_gap {
                    best_gap = gap;
                    best_j = Some(j);
                }
            }
            let mut updated = false;
            if let Some(j) = best_j {
                updated = state.try_update(i, j);
            }
            if !updated {
                for j in 0..n {
                    if j == i || Some(j) == best_j {
                        continue;
                    }
                    if state.try_update(i, j) {
                        updated = true;
                        break;
                    }
                }
            }
            if updated {
                changed += 1;
                let next = state.dual_objective();
                assert!(
                    next >= objective - 1e-9 * (1.0 + objective.abs()),
                    "dual objective decreased from {objective} to {next}"
                );
                objective = next;
            }
        }
        sweeps += 1;
        if changed == 0 {
            quiet_sweeps += 1;
        } else {
            quiet_sweeps = 0;
        }
    }

    // Rebuild the weight vector from the dual variables in one pass,
    // shedding the rounding drift of thousands of incremental updates.
    let mut weights = [0.0f64; FEATURE_DIM];
    for i in 0..n {
        if state.alpha[i] > 0.0 {
            for d in 0..FEATURE_DIM {
                weights[d] += state.alpha[i] * y[i] * x[i][d];
            }
        }
    }
    let support_count = state.alpha.iter().filter(|&&a| a > 0.0).count();

    let diagnostics = TrainingDiagnostics {
        dual_objective: state.dual_objective(),
        alphas: state.alpha,
        sweeps,
    };
    let model = SvmModel {
        weights,
        bias: state.b,
        scaler,
        support_count,
        c,
        tol,
    };
    Ok((model, diagnostics))
}

struct Solver<'a> {
    x: &'a [[f64; FEATURE_DIM]],
    y: &'a [f64],
    gram: &'a [f64],
    n: usize,
    c: f64,
    alpha: Vec<f64>,
    w: [f64; FEATURE_DIM],
    b: f64,
}

impl Solver<'_> {
    fn decision(&self, i: usize) -> f64 {
        dot(&self.w, &self.x[i]) + self.b
    }

    fn error(&self, i: usize) -> f64 {
        self.decision(i) - self.y[i]
    }

    /// Whether point `i` violates its KKT condition by more than `tol`.
    fn violates_kkt(&self, i: usize, tol: f64) -> bool {
        let r = self.y[i] * self.error(i);
        (r < -tol && self.alpha[i] < self.c) || (r > tol && self.alpha[i] > 0.0)
    }

    /// Jointly optimizes the pair `(i, j)`; reports whether a meaningful
    /// step was applied.
    fn try_update(&mut self, i: usize, j: usize) -> bool {
        let (a_i_old, a_j_old) = (self.alpha[i], self.alpha[j]);
        let (y_i, y_j) = (self.y[i], self.y[j]);
        let e_i = self.error(i);
        let e_j = self.error(j);

        let (lo, hi) = if y_i != y_j {
            (
                (a_j_old - a_i_old).max(0.0),
                (self.c + a_j_old - a_i_old).min(self.c),
            )
        } else {
            (
                (a_i_old + a_j_old - self.c).max(0.0),
                (a_i_old + a_j_old).min(self.c),
            )
        };
        if lo >= hi {
            return false;
        }

        let k_ii = self.gram[i * self.n + i];
        let k_jj = self.gram[j * self.n + j];
        let k_ij = self.gram[i * self.n + j];
        let eta = 2.0 * k_ij - k_ii - k_jj;
        if eta >= 0.0 {
            return false;
        }

        let a_j = (a_j_old - y_j * (e_i - e_j) / eta).clamp(lo, hi);
        if (a_j - a_j_old).abs() < MIN_ALPHA_STEP {
            return false;
        }
        let a_i = (a_i_old + y_i * y_j * (a_j_old - a_j)).clamp(0.0, self.c);

        self.alpha[i] = a_i;
        self.alpha[j] = a_j;
        let (d_i, d_j) = (a_i - a_i_old, a_j - a_j_old);
        for d in 0..FEATURE_DIM {
            self.w[d] += y_i * d_i * self.x[i][d] + y_j * d_j * self.x[j][d];
        }

        let b1 = self.b - e_i - y_i * d_i * k_ii - y_j * d_j * k_ij;
        let b2 = self.b - e_j - y_i * d_i * k_ij - y_j * d_j * k_jj;
        self.b = if a_i > 0.0 && a_i < self.c {
            b1
        } else if a_j > 0.0 && a_j < self.c {
            b2
        } else {
            (b1 + b2) / 2.0
        };
        true
    }

    /// `Σ αᵢ − ½ ΣΣ αᵢαⱼyᵢyⱼK(i,j)` — the quantity SMO maximizes.
    fn dual_objective(&self) -> f64 {
        let linear: f64 = self.alpha.iter().sum();
        let mut quad = 0.0;
        for i in 0..self.n {
            if self.alpha[i] == 0.0 {
                continue;
            }
            for j in 0..self.n {
                quad += self.alpha[i] * self.alpha[j] * self.y[i] * self.y[j]
                    * self.gram[i * self.n + j];
            }
        }
        linear - 0.5 * quad
    }
}
