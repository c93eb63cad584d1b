//! Benign/malignant grading: feature standardization, linear soft-margin
//! SVM training by sequential minimal optimization, classification, and
//! model persistence.
//!
//! Everything is deterministic — pair selection in the solver follows a
//! documented fixed order, so training twice on the same data produces
//! bit-identical models.

mod model;
mod scaler;
mod smo;

pub use scaler::Scaler;
pub use smo::{
    svm_train, svm_train_diagnostic, SvmModel, TrainingDiagnostics, DEFAULT_C,
    DEFAULT_MAX_PASSES, DEFAULT_TOL,
};

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::features::{FeatureVector, FEATURE_DIM};

/// Tumor grade. The decision convention maps Benign to −1 and Malignant
/// to +1; a decision value of exactly zero classifies as Benign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Grade {
    Benign,
    Malignant,
}

impl Grade {
    /// The ±1 target used by the solver.
    #[must_use]
    pub fn sign(self) -> f64 {
        match self {
            Grade::Benign => -1.0,
            Grade::Malignant => 1.0,
        }
    }

    /// Grade of a decision value: strictly positive means Malignant, zero
    /// or negative means Benign.
    #[must_use]
    pub fn from_decision(value: f64) -> Self {
        if value > 0.0 {
            Grade::Malignant
        } else {
            Grade::Benign
        }
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grade::Benign => "Benign",
            Grade::Malignant => "Malignant",
        })
    }
}

impl FromStr for Grade {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("benign") {
            Ok(Grade::Benign)
        } else if s.eq_ignore_ascii_case("malignant") {
            Ok(Grade::Malignant)
        } else {
            Err(ClassifyError::UnknownGrade(s.to_string()))
        }
    }
}

/// Errors raised by training, classification, and model persistence.
#[derive(Debug, thiserror::Error)]
pub enum ClassifyError {
    #[error("training data contains only one grade; need examples of both")]
    SingleClassData,
    #[error("non-finite feature value in training row {row}, column {column}")]
    NonFiniteFeature { row: usize, column: usize },
    #[error("non-finite value in feature column {column}")]
    NonFiniteInput { column: usize },
    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparameter(String),
    #[error("unknown grade {0:?} (expected Benign or Malignant)")]
    UnknownGrade(String),
    #[error("malformed training CSV: {0}")]
    MalformedTrainingCsv(String),
    #[error("failed to access {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed model file: {0}")]
    MalformedModelFile(String),
    #[error("unsupported model version {0:?}")]
    VersionMismatch(String),
}

/// Labeled examples for training: feature vectors with known grades.
///
/// Construction validates that both grades are represented and every value
/// is finite, so downstream code can assume a well-formed set.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    rows: Vec<(FeatureVector, Grade)>,
}

impl TrainingSet {
    pub fn new(rows: Vec<(FeatureVector, Grade)>) -> Result<Self, ClassifyError> {
        for (r, (fv, _)) in rows.iter().enumerate() {
            if let Some(column) = fv.as_array().iter().position(|v| !v.is_finite()) {
                return Err(ClassifyError::NonFiniteFeature { row: r, column });
            }
        }
        let benign = rows.iter().filter(|(_, g)| *g == Grade::Benign).count();
        if benign == 0 || benign == rows.len() {
            return Err(ClassifyError::SingleClassData);
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[(FeatureVector, Grade)] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `(benign, malignant)` example counts.
    pub fn class_counts(&self) -> (usize, usize) {
        let benign = self.rows.iter().filter(|(_, g)| *g == Grade::Benign).count();
        (benign, self.rows.len() - benign)
    }

    /// The raw (unstandardized) feature rows.
    pub(crate) fn feature_matrix(&self) -> Vec<[f64; FEATURE_DIM]> {
        self.rows.iter().map(|(fv, _)| fv.as_array()).collect()
    }

    /// Parses the labeled-features CSV written by [`to_csv`](Self::to_csv):
    /// the feature header plus a trailing `grade` column.
    pub fn from_csv(text: &str) -> Result<Self, ClassifyError> {
        let expected = format!("{},grade", FeatureVector::csv_header());
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == expected => {}
            Some(h) => {
                return Err(ClassifyError::MalformedTrainingCsv(format!(
                    "unexpected header {h:?}"
                )))
            }
            None => return Err(ClassifyError::MalformedTrainingCsv("empty file".into())),
        }
        let mut rows = Vec::new();
        for (idx, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != FEATURE_DIM + 1 {
                return Err(ClassifyError::MalformedTrainingCsv(format!(
                    "row {} has {} fields, expected {}",
                    idx + 2,
                    fields.len(),
                    FEATURE_DIM + 1
                )));
            }
            let mut values = [0.0f64; FEATURE_DIM];
            for (v, field) in values.iter_mut().zip(&fields) {
                *v = field.parse().map_err(|_| {
                    ClassifyError::MalformedTrainingCsv(format!(
                        "row {}: {field:?} is not a number",
                        idx + 2
                    ))
                })?;
            }
            if let Some(column) = values.iter().position(|v| !v.is_finite()) {
                return Err(ClassifyError::NonFiniteFeature {
                    row: rows.len(),
                    column,
                });
            }
            let grade: Grade = fields[FEATURE_DIM].parse()?;
            rows.push((FeatureVector::from_array(values), grade));
        }
        Self::new(rows)
    }

    /// Serializes the set as CSV with a trailing `grade` column.
    #[must_use]
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},grade\n", FeatureVector::csv_header());
        for (fv, grade) in &self.rows {
            out.push_str(&fv.csv_row());
            out.push(',');
            out.push_str(&grade.to_string());
            out.push('\n');
        }
        out
    }
}

/// Fraction of `rows` the model grades correctly.
#[must_use]
pub fn accuracy(model: &SvmModel, rows: &[(FeatureVector, Grade)]) -> f64 {
    if rows.is_empty() {
        return 1.0;
    }
    let correct = rows
        .iter()
        .filter(|(fv, grade)| {
            let (predicted, _) = model
                .classify(fv)
                .expect("validated rows are finite");
            predicted == *grade
        })
        .count();
    correct as f64 / rows.len() as f64
}


#[cfg(test)]
mod tests {
    use super::test_support::sparse_vector;
    use super::*;

    #[test]
    fn grade_parsing_and_display() {
        assert_eq!("Benign".parse::<Grade>().unwrap(), Grade::Benign);
        assert_eq!("malignant".parse::<Grade>().unwrap(), Grade::Malignant);
        assert_eq!("MALIGNANT".parse::<Grade>().unwrap(), Grade::Malignant);
        assert!(matches!(
            "tumor".parse::<Grade>(),
            Err(ClassifyError::UnknownGrade(_))
        ));
        assert_eq!(Grade::Benign.to_string(), "Benign");
        assert_eq!(Grade::Malignant.to_string(), "Malignant");
    }

    #[test]
    fn decision_ties_grade_benign() {
        assert_eq!(Grade::from_decision(0.0), Grade::Benign);
        assert_eq!(Grade::from_decision(-0.5), Grade::Benign);
        assert_eq!(Grade::from_decision(1e-12), Grade::Malignant);
    }

    #[test]
    fn training_set_requires_both_grades() {
        let fv = sparse_vector(&[(7, 1.0)]);
        assert!(matches!(
            TrainingSet::new(vec![(fv, Grade::Benign), (fv, Grade::Benign)]),
            Err(ClassifyError::SingleClassData)
        ));
        assert!(TrainingSet::new(vec![
            (fv, Grade::Benign),
            (fv, Grade::Malignant)
        ])
        .is_ok());
    }

    #[test]
    fn training_set_rejects_non_finite_values() {
        let bad = sparse_vector(&[(3, f64::NAN)]);
        let good = sparse_vector(&[(3, 1.0)]);
        assert!(matches!(
            TrainingSet::new(vec![(good, Grade::Benign), (bad, Grade::Malignant)]),
            Err(ClassifyError::NonFiniteFeature { row: 1, column: 3 })
        ));
    }

    #[test]
    fn labeled_csv_round_trips() {
        let rows = vec![
            (sparse_vector(&[(0, 120.0), (7, 80.5)]), Grade::Benign),
            (sparse_vector(&[(0, 600.0), (7, 200.25)]), Grade::Malignant),
        ];
        let ts = TrainingSet::new(rows).unwrap();
        let csv = ts.to_csv();
        let back = TrainingSet::from_csv(&csv).unwrap();
        assert_eq!(back, ts);
    }

    #[test]
    fn malformed_training_csv_is_reported() {
        assert!(matches!(
            TrainingSet::from_csv("not,a,header\n"),
            Err(ClassifyError::MalformedTrainingCsv(_))
        ));
        let short_row = format!("{},grade\n1,2,3\n", FeatureVector::csv_header());
        assert!(matches!(
            TrainingSet::from_csv(&short_row),
            Err(ClassifyError::MalformedTrainingCsv(_))
        ));
    }
}
