//! Logistic regression by full-batch gradient descent on mean cross-entropy.
//!
//! Inputs are standardised with statistics from the training rows before
//! descent starts. The fitted model is still a logistic model of the raw
//! features; standardising only conditions the optimisation, which otherwise
//! stalls on columns measured in hundreds.

use alloc::vec;
use alloc::vec::Vec;

use super::Objective;
use crate::math::{sigmoid, softplus};
use crate::matrix::{dot, Matrix, Standardizer};

#[derive(Debug, Clone)]
pub struct LogisticModel {
    scaler: Standardizer,
    /// Weights followed by the bias, in standardised units.
    params: Vec<f64>,
}

impl LogisticModel {
    pub fn score(&self, row: &[f64]) -> f64 {
        let mut z = vec![0.0; row.len()];
        self.scaler.transform_row(row, &mut z);
        let d = row.len();
        sigmoid(dot(&self.params[..d], &z) + self.params[d])
    }
}

/// Mean cross-entropy of a logistic model; parameters are `[w..., b]`.
pub struct LogisticObjective<'a> {
    pub x: &'a Matrix,
    pub y: &'a [u8],
}

impl Objective for LogisticObjective<'_> {
    fn dim(&self) -> usize {
        self.x.cols() + 1
    }

    fn loss(&self, p: &[f64]) -> f64 {
        let d = self.x.cols();
        let total: f64 = self
            .x
            .iter_rows()
            .zip(self.y)
            .map(|(r, &t)| {
                let z = dot(&p[..d], r) + p[d];
                softplus(z) - t as f64 * z
            })
            .sum();
        total / self.y.len() as f64
    }

    fn gradient(&self, p: &[f64]) -> Vec<f64> {
        let d = self.x.cols();
        let n = self.y.len() as f64;
        let mut g = vec![0.0; d + 1];
        for (r, &t) in self.x.iter_rows().zip(self.y) {
            let e = sigmoid(dot(&p[..d], r) + p[d]) - t as f64;
            for (gj, v) in g.iter_mut().zip(r) {
                *gj += e * v;
            }
            g[d] += e;
        }
        g.iter_mut().for_each(|v| *v /= n);
        g
    }
}

/// Zero-initialised descent; returns the model and its final training loss.
pub fn fit(x: &Matrix, y: &[u8], learning_rate: f64, epochs: usize) -> (LogisticModel, f64) {
    let scaler = Standardizer::fit(x);
    let z = scaler.transform(x);
    let obj = LogisticObjective { x: &z, y };
    let mut params = vec![0.0; obj.dim()];
    for _ in 0..epochs {
        let g = obj.gradient(&params);
        params.iter_mut().zip(&g).for_each(|(p, g)| *p -= learning_rate * g);
    }
    let loss = obj.loss(&params);
    (LogisticModel { scaler, params }, loss)
}
