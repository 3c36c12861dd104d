//! Naive Bayes with Gaussian likelihoods for numerical columns and
//! Laplace-smoothed frequencies for categorical ones.

use alloc::vec::Vec;

use crate::math::{ln, sigmoid};
use crate::matrix::Matrix;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

#[derive(Debug, Clone)]
enum Column {
    Gaussian { mean: [f64; 2], var: [f64; 2] },
    Discrete { levels: Vec<f64>, counts: [Vec<f64>; 2], laplace: f64 },
}

#[derive(Debug, Clone)]
pub struct NaiveBayesModel {
    class_n: [usize; 2],
    columns: Vec<Column>,
}

pub fn fit(x: &Matrix, y: &[u8], var_floor: f64, laplace: f64) -> NaiveBayesModel {
    let mut class_n = [0usize; 2];
    for &l in y {
        class_n[l as usize] += 1;
    }
    let columns = (0..x.cols())
        .map(|j| {
            let col = x.column(j);
            if x.is_categorical(j) {
                let mut levels = col.clone();
                levels.sort_by(f64::total_cmp);
                levels.dedup();
                let mut counts = [alloc::vec![0.0; levels.len()], alloc::vec![0.0; levels.len()]];
                for (v, &l) in col.iter().zip(y) {
                    let k = levels.partition_point(|a| a < v);
                    counts[l as usize][k] += 1.0;
                }
                Column::Discrete { levels, counts, laplace }
            } else {
                let mut mean = [0.0; 2];
                let mut var = [0.0; 2];
                for (v, &l) in col.iter().zip(y) {
                    mean[l as usize] += v;
                }
                for c in 0..2 {
                    mean[c] /= class_n[c].max(1) as f64;
                }
                for (v, &l) in col.iter().zip(y) {
                    var[l as usize] += (v - mean[l as usize]) * (v - mean[l as usize]);
                }
                for c in 0..2 {
                    var[c] = (var[c] / class_n[c].max(1) as f64).max(var_floor);
                }
                Column::Gaussian { mean, var }
            }
        })
        .collect();
    NaiveBayesModel { class_n, columns }
}

impl NaiveBayesModel {
    fn log_joint(&self, row: &[f64], c: usize) -> f64 {
        let n = self.class_n[0] + self.class_n[1];
        let mut lp = ln(self.class_n[c] as f64 / n as f64);
        for (col, &v) in self.columns.iter().zip(row) {
            lp += match col {
                Column::Gaussian { mean, var } => {
                    let d = v - mean[c];
                    -0.5 * (LN_2PI + ln(var[c]) + d * d / var[c])
                }
                Column::Discrete { levels, counts, laplace } => {
                    let seen = levels.iter().position(|&l| l == v).map_or(0.0, |k| counts[c][k]);
                    let denom = self.class_n[c] as f64 + laplace * levels.len() as f64;
                    ln((seen + laplace) / denom)
                }
            };
        }
        lp
    }

    /// Posterior probability of class 1.
    pub fn score(&self, row: &[f64]) -> f64 {
        if self.class_n[0] == 0 {
            return 1.0;
        }
        if self.class_n[1] == 0 {
            return 0.0;
        }
        let (l0, l1) = (self.log_joint(row, 0), self.log_joint(row, 1));
        if l0 == f64::NEG_INFINITY && l1 == f64::NEG_INFINITY {
            return self.class_n[1] as f64 / (self.class_n[0] + self.class_n[1]) as f64;
        }
        sigmoid(l1 - l0)
    }
}
