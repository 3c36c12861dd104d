//! Cleveland heart-disease schema and the validated, numerically encoded dataset.

use alloc::borrow::ToOwned;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::math::round;
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum FeatureKind {
    Binary,
    Categorical,
    NumericalContinuous,
    NumericalDiscrete,
}

impl FeatureKind {
    #[inline]
    pub fn is_numerical(self) -> bool {
        matches!(self, FeatureKind::NumericalContinuous | FeatureKind::NumericalDiscrete)
    }

    #[inline]
    pub fn is_categorical(self) -> bool {
        !self.is_numerical()
    }

    pub fn name(self) -> &'static str {
        match self {
            FeatureKind::Binary => "binary",
            FeatureKind::Categorical => "categorical",
            FeatureKind::NumericalContinuous => "numerical-continuous",
            FeatureKind::NumericalDiscrete => "numerical-discrete",
        }
    }
}

impl core::fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureSchema {
    pub code: String,
    pub source_name: String,
    pub kind: FeatureKind,
    /// Admissible integer codes; empty for numerical features.
    pub levels: Vec<i64>,
}

impl FeatureSchema {
    pub fn new(code: &str, source_name: &str, kind: FeatureKind, levels: &[i64]) -> Self {
        FeatureSchema {
            code: code.to_owned(),
            source_name: source_name.to_owned(),
            kind,
            levels: levels.to_vec(),
        }
    }

    pub fn numerical(code: &str, source_name: &str) -> Self {
        FeatureSchema::new(code, source_name, FeatureKind::NumericalContinuous, &[])
    }

    pub fn binary(code: &str, source_name: &str) -> Self {
        FeatureSchema::new(code, source_name, FeatureKind::Binary, &[0, 1])
    }

    fn admits(&self, v: f64) -> bool {
        if !v.is_finite() {
            return false;
        }
        if self.kind.is_numerical() {
            return true;
        }
        round(v) == v && self.levels.contains(&(v as i64))
    }
}

/// Code used to address the target through [`Dataset::column`].
pub const TARGET_CODE: &str = "Target";

/// Column order of the UCI `processed.cleveland.data` file; the last entry is
/// the raw 0-4 diagnosis.
pub const UCI_COLUMNS: [&str; 14] = [
    "age", "sex", "cp", "trestbps", "chol", "fbs", "restecg", "thalach", "exang", "oldpeak",
    "slope", "ca", "thal", "num",
];

// Position of each schema feature (in schema order) within UCI_COLUMNS.
const SCHEMA_TO_UCI: [usize; 13] = [8, 6, 0, 2, 5, 7, 3, 4, 9, 11, 10, 12, 1];

/// The 13 Cleveland features in reference-table order.
///
/// Level codes follow the UCI file: slope is coded 1-3 and thal 3/6/7.
pub fn cleveland_schema() -> Vec<FeatureSchema> {
    use FeatureKind::*;
    vec![
        FeatureSchema::new("EIA", "exang", Binary, &[0, 1]),
        FeatureSchema::new("REC", "restecg", Categorical, &[0, 1, 2]),
        FeatureSchema::new("AGE", "age", NumericalContinuous, &[]),
        FeatureSchema::new("CPT", "cp", Categorical, &[1, 2, 3, 4]),
        FeatureSchema::new("FBS", "fbs", Binary, &[0, 1]),
        FeatureSchema::new("MHR", "thalach", NumericalContinuous, &[]),
        FeatureSchema::new("BRP", "trestbps", NumericalContinuous, &[]),
        FeatureSchema::new("CHOL", "chol", NumericalContinuous, &[]),
        FeatureSchema::new("OP", "oldpeak", NumericalContinuous, &[]),
        FeatureSchema::new("CMV", "ca", NumericalDiscrete, &[]),
        FeatureSchema::new("PES", "slope", Categorical, &[1, 2, 3]),
        FeatureSchema::new("TS", "thal", Categorical, &[3, 6, 7]),
        FeatureSchema::new("GEN", "sex", Binary, &[0, 1]),
    ]
}

pub fn cleveland_target() -> FeatureSchema {
    FeatureSchema::new(TARGET_CODE, "num", FeatureKind::Binary, &[0, 1])
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DatasetError {
    #[error("dataset has no rows")]
    Empty,
    #[error("dataset has no feature columns")]
    NoFeatures,
    #[error("expected {expected} values for the declared shape, got {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("feature {feature}, row {row}: value {value} is not a declared level")]
    InvalidLevel { feature: String, row: usize, value: f64 },
    #[error("feature {feature}, row {row}: value is not finite")]
    NonFinite { feature: String, row: usize },
    #[error("row {row}: target value {value} is not a valid diagnosis code")]
    InvalidTarget { row: usize, value: f64 },
    #[error("unknown feature code {0:?}")]
    UnknownFeature(String),
    #[error("duplicate feature code {0:?}")]
    DuplicateFeature(String),
    #[error("column has {found} values, dataset has {expected} rows")]
    ColumnLength { expected: usize, found: usize },
}

/// Immutable feature matrix with its schema and a binary target.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<FeatureSchema>,
    values: Vec<f64>,
    target: Vec<u8>,
    dropped_rows: usize,
}

impl Dataset {
    /// Validates shape, level membership and target codes. Rows in errors are
    /// zero-based indices.
    pub fn new(
        features: Vec<FeatureSchema>,
        values: Vec<f64>,
        target: Vec<u8>,
    ) -> Result<Self, DatasetError> {
        Dataset::validated(features, values, target, |i| i)
    }

    fn validated(
        features: Vec<FeatureSchema>,
        values: Vec<f64>,
        target: Vec<u8>,
        row_label: impl Fn(usize) -> usize,
    ) -> Result<Self, DatasetError> {
        if features.is_empty() {
            return Err(DatasetError::NoFeatures);
        }
        if target.is_empty() {
            return Err(DatasetError::Empty);
        }
        for (i, f) in features.iter().enumerate() {
            if features[..i].iter().any(|g| g.code == f.code) || f.code == TARGET_CODE {
                return Err(DatasetError::DuplicateFeature(f.code.clone()));
            }
        }
        let d = features.len();
        if values.len() != target.len() * d {
            return Err(DatasetError::ShapeMismatch {
                expected: target.len() * d,
                found: values.len(),
            });
        }
        for (r, (row, &t)) in values.chunks_exact(d).zip(&target).enumerate() {
            if t > 1 {
                return Err(DatasetError::InvalidTarget { row: row_label(r), value: t as f64 });
            }
            for (f, &v) in features.iter().zip(row) {
                if !v.is_finite() {
                    return Err(DatasetError::NonFinite { feature: f.code.clone(), row: row_label(r) });
                }
                if !f.admits(v) {
                    return Err(DatasetError::InvalidLevel {
                        feature: f.code.clone(),
                        row: row_label(r),
                        value: v,
                    });
                }
            }
        }
        Ok(Dataset { features, values, target, dropped_rows: 0 })
    }

    /// Builds the Cleveland dataset from complete rows in UCI column order.
    ///
    /// Each row carries its source line number, which is what validation
    /// errors report. The raw diagnosis 0 maps to 0 and 1-4 map to 1.
    pub fn from_cleveland_rows(
        rows: &[(usize, [f64; 14])],
        dropped_rows: usize,
    ) -> Result<Self, DatasetError> {
        if rows.is_empty() {
            return Err(DatasetError::Empty);
        }
        let mut values = Vec::with_capacity(rows.len() * 13);
        let mut target = Vec::with_capacity(rows.len());
        for (line, raw) in rows {
            for &u in &SCHEMA_TO_UCI {
                values.push(raw[u]);
            }
            let t = raw[13];
            if !(t.is_finite() && round(t) == t && (0.0..=4.0).contains(&t)) {
                return Err(DatasetError::InvalidTarget { row: *line, value: t });
            }
            target.push(u8::from(t > 0.0));
        }
        let mut ds = Dataset::validated(cleveland_schema(), values, target, |i| rows[i].0)?;
        ds.dropped_rows = dropped_rows;
        Ok(ds)
    }

    pub fn with_dropped_rows(mut self, dropped: usize) -> Self {
        self.dropped_rows = dropped;
        self
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.target.len()
    }

    #[inline]
    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    pub fn features(&self) -> &[FeatureSchema] {
        &self.features
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn target(&self) -> &[u8] {
        &self.target
    }

    /// Rows removed at load time because they had missing values.
    pub fn dropped_rows(&self) -> usize {
        self.dropped_rows
    }

    #[inline]
    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.features.len() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let d = self.features.len();
        &self.values[row * d..(row + 1) * d]
    }

    pub fn feature_index(&self, code: &str) -> Option<usize> {
        self.features.iter().position(|f| f.code == code)
    }

    /// Values of one column in row order; [`TARGET_CODE`] yields the target.
    pub fn column(&self, code: &str) -> Result<Vec<f64>, DatasetError> {
        if code == TARGET_CODE {
            return Ok(self.target.iter().map(|&t| t as f64).collect());
        }
        let j = self
            .feature_index(code)
            .ok_or_else(|| DatasetError::UnknownFeature(code.to_owned()))?;
        Ok(self.column_at(j))
    }

    pub fn column_at(&self, col: usize) -> Vec<f64> {
        self.values
            .chunks_exact(self.features.len())
            .map(|r| r[col])
            .collect()
    }

    /// Target as signed level codes, the form the contingency machinery takes.
    pub fn target_levels(&self) -> Vec<i64> {
        self.target.iter().map(|&t| t as i64).collect()
    }

    /// Count of rows per class, `[negatives, positives]`.
    pub fn class_counts(&self) -> [usize; 2] {
        let pos = self.target.iter().filter(|&&t| t == 1).count();
        [self.rows() - pos, pos]
    }

    /// Feature codes split into (numerical, categorical), each in schema order.
    pub fn split_by_kind(&self) -> (Vec<String>, Vec<String>) {
        let (num, cat): (Vec<_>, Vec<_>) =
            self.features.iter().partition(|f| f.kind.is_numerical());
        (
            num.into_iter().map(|f| f.code.clone()).collect(),
            cat.into_iter().map(|f| f.code.clone()).collect(),
        )
    }

    /// Rows picked by index, in the given order.
    pub fn subset_rows(&self, indices: &[usize]) -> Dataset {
        let d = self.features.len();
        let mut values = Vec::with_capacity(indices.len() * d);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        Dataset {
            features: self.features.clone(),
            values,
            target: indices.iter().map(|&i| self.target[i]).collect(),
            dropped_rows: self.dropped_rows,
        }
    }

    /// Columns picked by index, in the given order.
    pub fn select_features(&self, columns: &[usize]) -> Result<Dataset, DatasetError> {
        if columns.is_empty() {
            return Err(DatasetError::NoFeatures);
        }
        let mut values = Vec::with_capacity(self.rows() * columns.len());
        for r in 0..self.rows() {
            let row = self.row(r);
            values.extend(columns.iter().map(|&j| row[j]));
        }
        Ok(Dataset {
            features: columns.iter().map(|&j| self.features[j].clone()).collect(),
            values,
            target: self.target.clone(),
            dropped_rows: self.dropped_rows,
        })
    }

    /// Appends a column after validating it against its schema.
    pub fn with_feature(&self, schema: FeatureSchema, column: &[f64]) -> Result<Dataset, DatasetError> {
        if column.len() != self.rows() {
            return Err(DatasetError::ColumnLength { expected: self.rows(), found: column.len() });
        }
        let d = self.features.len();
        let mut values = Vec::with_capacity(self.rows() * (d + 1));
        for (r, &v) in column.iter().enumerate() {
            values.extend_from_slice(self.row(r));
            values.push(v);
        }
        let mut features = self.features.clone();
        features.push(schema);
        let mut ds = Dataset::new(features, values, self.target.clone())?;
        ds.dropped_rows = self.dropped_rows;
        Ok(ds)
    }

    /// Numeric design matrix for model fitting.
    ///
    /// With `one_hot`, categorical features with more than two declared levels
    /// become indicator columns for every level but the first; binary and
    /// numerical features pass through unchanged. Columns that hold raw level
    /// codes are flagged categorical in the result.
    pub fn design_matrix(&self, one_hot: bool) -> Matrix {
        let mut data = Vec::new();
        let mut mask = Vec::new();
        for f in &self.features {
            if one_hot && f.kind == FeatureKind::Categorical && f.levels.len() > 2 {
                mask.extend(core::iter::repeat_n(false, f.levels.len() - 1));
            } else {
                mask.push(f.kind.is_categorical());
            }
        }
        for r in 0..self.rows() {
            for (f, &v) in self.features.iter().zip(self.row(r)) {
                if one_hot && f.kind == FeatureKind::Categorical && f.levels.len() > 2 {
                    data.extend(f.levels[1..].iter().map(|&l| if v as i64 == l { 1.0 } else { 0.0 }));
                } else {
                    data.push(v);
                }
            }
        }
        let cols = mask.len();
        Matrix::new(self.rows(), cols, data)
            .and_then(|m| m.with_categorical(mask))
            .expect("design matrix shape follows the schema")
    }
}
