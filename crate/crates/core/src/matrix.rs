//! Dense row-major feature matrix and the small amount of linear algebra the
//! classifiers need.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::sqrt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ShapeError {
    #[error("expected {expected} values for the declared shape, got {found}")]
    DataLength { expected: usize, found: usize },
    #[error("row {row} has {found} columns, expected {expected}")]
    RaggedRow { row: usize, expected: usize, found: usize },
    #[error("column mask has {found} entries for {expected} columns")]
    MaskLength { expected: usize, found: usize },
}

/// Row-major matrix of feature values with a per-column categorical flag.
///
/// The flag only matters to models that treat discrete columns differently
/// (naive Bayes); everything else sees plain numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    categorical: Vec<bool>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, ShapeError> {
        if data.len() != rows * cols {
            return Err(ShapeError::DataLength {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data, categorical: vec![false; cols] })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, ShapeError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(ShapeError::RaggedRow { row: i, expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Matrix::new(rows.len(), cols, data)
    }

    /// Single-column matrix.
    pub fn column_vector(values: &[f64]) -> Self {
        Matrix {
            rows: values.len(),
            cols: 1,
            data: values.to_vec(),
            categorical: vec![false],
        }
    }

    pub fn with_categorical(mut self, mask: Vec<bool>) -> Result<Self, ShapeError> {
        if mask.len() != self.cols {
            return Err(ShapeError::MaskLength { expected: self.cols, found: mask.len() });
        }
        self.categorical = mask;
        Ok(self)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        self.iter_rows().map(|r| r[col]).collect()
    }

    pub fn is_categorical(&self, col: usize) -> bool {
        self.categorical[col]
    }

    pub fn categorical_mask(&self) -> &[bool] {
        &self.categorical
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Rows picked by index, duplicates allowed.
    pub fn select_rows(&self, indices: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            rows: indices.len(),
            cols: self.cols,
            data,
            categorical: self.categorical.clone(),
        }
    }
}

/// Per-column standardisation fitted on one matrix and applied to others.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Standardizer {
    means: Vec<f64>,
    scales: Vec<f64>,
}

impl Standardizer {
    /// Population mean and standard deviation per column; constant columns
    /// get scale 1 so they map to zero.
    pub fn fit(x: &Matrix) -> Self {
        let n = x.rows().max(1) as f64;
        let mut means = vec![0.0; x.cols()];
        for r in x.iter_rows() {
            for (m, v) in means.iter_mut().zip(r) {
                *m += v;
            }
        }
        means.iter_mut().for_each(|m| *m /= n);
        let mut vars = vec![0.0; x.cols()];
        for r in x.iter_rows() {
            for ((s, v), m) in vars.iter_mut().zip(r).zip(&means) {
                *s += (v - m) * (v - m);
            }
        }
        let scales = vars
            .into_iter()
            .map(|s| {
                let sd = sqrt(s / n);
                if sd > 0.0 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Standardizer { means, scales }
    }

    pub fn transform_row(&self, row: &[f64], out: &mut [f64]) {
        for (((o, v), m), s) in out.iter_mut().zip(row).zip(&self.means).zip(&self.scales) {
            *o = (v - m) / s;
        }
    }

    pub fn transform(&self, x: &Matrix) -> Matrix {
        let mut data = vec![0.0; x.data.len()];
        for (i, r) in x.iter_rows().enumerate() {
            self.transform_row(r, &mut data[i * x.cols..(i + 1) * x.cols]);
        }
        Matrix {
            rows: x.rows,
            cols: x.cols,
            data,
            categorical: x.categorical.clone(),
        }
    }
}

/// Solves `A x = b` for a symmetric positive-definite `A` (row-major, n×n)
/// by Cholesky factorisation. Returns `None` if `A` is not positive definite.
pub fn cholesky_solve(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    debug_assert_eq!(a.len(), n * n);
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if !(sum > 0.0) {
                    return None;
                }
                l[i * n + i] = sqrt(sum);
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    // forward: L y = b
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i * n + k] * y[k];
        }
        y[i] = sum / l[i * n + i];
    }
    // back: L^T x = y
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = y[i];
        for k in i + 1..n {
            sum -= l[k * n + i] * x[k];
        }
        x[i] = sum / l[i * n + i];
    }
    Some(x)
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
