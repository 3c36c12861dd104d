//! Gradient boosting of regression trees on the logistic loss.
//!
//! Each round fits a variance-criterion tree to the residuals `y - p` and
//! sets every leaf to the Newton step `sum(y - p) / sum(p (1 - p))` over its
//! rows. The additive score starts at the log-odds of the base rate.

use alloc::vec::Vec;

use super::tree::{Criterion, Grower, Tree, TreeParams};
use crate::math::{ln, sigmoid, softplus};
use crate::matrix::Matrix;

#[derive(Debug, Clone)]
pub struct BoostingModel {
    init: f64,
    learning_rate: f64,
    trees: Vec<Tree>,
}

impl BoostingModel {
    pub fn raw_score(&self, row: &[f64]) -> f64 {
        self.init + self.learning_rate * self.trees.iter().map(|t| t.predict_row(row)).sum::<f64>()
    }

    pub fn score(&self, row: &[f64]) -> f64 {
        sigmoid(self.raw_score(row))
    }
}

/// Returns the model and its final mean log-loss on the training rows.
/// Both classes must be present.
pub fn fit(x: &Matrix, y: &[u8], n_trees: usize, learning_rate: f64, params: &TreeParams) -> (BoostingModel, f64) {
    let n = y.len();
    let pos = y.iter().filter(|&&l| l == 1).count() as f64;
    let base = pos / n as f64;
    let init = ln(base / (1.0 - base));
    let labels: Vec<f64> = y.iter().map(|&l| l as f64).collect();
    let mut f = alloc::vec![init; n];
    let weight = alloc::vec![1.0; n];
    let mut trees = Vec::with_capacity(n_trees);
    for _ in 0..n_trees {
        let p: Vec<f64> = f.iter().map(|&v| sigmoid(v)).collect();
        let resid: Vec<f64> = labels.iter().zip(&p).map(|(t, p)| t - p).collect();
        let hess: Vec<f64> = p.iter().map(|p| p * (1.0 - p)).collect();
        let grower = Grower { x, target: &resid, weight: &weight, criterion: Criterion::Variance, params: *params };
        let leaf = |idx: &[usize]| {
            let g: f64 = idx.iter().map(|&i| resid[i]).sum();
            let h: f64 = idx.iter().map(|&i| hess[i]).sum();
            if h < 1e-12 {
                0.0
            } else {
                g / h
            }
        };
        let tree = grower.grow((0..n).collect(), &leaf, None);
        for (i, fi) in f.iter_mut().enumerate() {
            *fi += learning_rate * tree.predict_row(x.row(i));
        }
        trees.push(tree);
    }
    let loss = f.iter().zip(&labels).map(|(&z, &t)| softplus(z) - t * z).sum::<f64>() / n as f64;
    (BoostingModel { init, learning_rate, trees }, loss)
}
