//! Two-class SAMME boosting of depth-1 Gini stumps.
//!
//! A stump's vote weight is `ln((1 - err) / err)`. Misclassified rows are
//! scaled by `exp(alpha)` and the weights renormalised, which leaves the
//! round's stump with weighted error exactly one half. Boosting stops early
//! when a stump is perfect (kept with weight 1) or no better than chance
//! (discarded).

use alloc::vec;
use alloc::vec::Vec;

use super::tree::{fit_weighted, Tree, TreeParams};
use crate::math::{exp, ln};
use crate::matrix::Matrix;

const STUMP: TreeParams = TreeParams { max_depth: Some(1), min_samples_split: 2, max_features: None };

#[derive(Debug, Clone)]
pub struct AdaBoostModel {
    stumps: Vec<Tree>,
    alphas: Vec<f64>,
}

impl AdaBoostModel {
    /// Vote-weighted fraction of stumps predicting class 1; 0.5 when empty.
    pub fn score(&self, row: &[f64]) -> f64 {
        let total: f64 = self.alphas.iter().sum();
        if self.stumps.is_empty() || total <= 0.0 {
            return 0.5;
        }
        let pos: f64 = self
            .stumps
            .iter()
            .zip(&self.alphas)
            .filter(|(s, _)| stump_label(s, row) == 1)
            .map(|(_, a)| a)
            .sum();
        pos / total
    }

    pub fn len(&self) -> usize {
        self.stumps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stumps.is_empty()
    }
}

fn stump_label(stump: &Tree, row: &[f64]) -> u8 {
    u8::from(stump.predict_row(row) >= 0.5)
}

/// One boosting round, kept for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct BoostRound {
    /// Weighted error of the round's stump before reweighting.
    pub error: f64,
    pub alpha: f64,
    /// The stump's labels on the training rows.
    pub predictions: Vec<u8>,
    /// Normalised row weights after this round's update.
    pub weights_after: Vec<f64>,
}

/// Runs up to `rounds` rounds and returns the model with its round trace.
/// Rounds that stop boosting without contributing a stump are not traced.
pub fn boost(x: &Matrix, y: &[u8], rounds: usize) -> (AdaBoostModel, Vec<BoostRound>) {
    let n = y.len();
    let target: Vec<f64> = y.iter().map(|&l| l as f64).collect();
    let mut w = vec![1.0 / n as f64; n];
    let mut model = AdaBoostModel { stumps: Vec::new(), alphas: Vec::new() };
    let mut trace = Vec::new();
    for _ in 0..rounds {
        let stump = fit_weighted(x, &target, &w, &STUMP);
        let pred: Vec<u8> = x.iter_rows().map(|r| stump_label(&stump, r)).collect();
        let total: f64 = w.iter().sum();
        let wrong: f64 = w.iter().zip(&pred).zip(y).filter(|((_, p), t)| p != t).map(|((w, _), _)| w).sum();
        let err = wrong / total;
        if err >= 0.5 {
            break;
        }
        if err <= 0.0 {
            model.stumps.push(stump);
            model.alphas.push(1.0);
            trace.push(BoostRound { error: 0.0, alpha: 1.0, predictions: pred, weights_after: w.clone() });
            break;
        }
        let alpha = ln((1.0 - err) / err);
        let boost = exp(alpha);
        for ((wi, p), t) in w.iter_mut().zip(&pred).zip(y) {
            if p != t {
                *wi *= boost;
            }
        }
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|wi| *wi /= s);
        model.stumps.push(stump);
        model.alphas.push(alpha);
        trace.push(BoostRound { error: err, alpha, predictions: pred, weights_after: w.clone() });
    }
    (model, trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reweighting_moves_error_to_one_half() {
        let x = Matrix::column_vector(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]);
        let y = [0, 1, 0, 0, 1, 1, 0, 1];
        let (m, trace) = boost(&x, &y, 10);
        assert!(!m.is_empty());
        for r in &trace {
            let wrong: f64 = r
                .weights_after
                .iter()
                .zip(&r.predictions)
                .zip(&y)
                .filter(|((_, p), t)| p != t)
                .map(|((w, _), _)| w)
                .sum();
            assert!((wrong - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn perfect_stump_stops_boosting() {
        let x = Matrix::column_vector(&[0.0, 1.0, 2.0, 3.0]);
        let (m, trace) = boost(&x, &[0, 0, 1, 1], 50);
        assert_eq!(m.len(), 1);
        assert_eq!(trace[0].error, 0.0);
        assert_eq!(m.score(&[3.0]), 1.0);
    }

    #[test]
    fn chance_level_stump_leaves_empty_model() {
        let x = Matrix::from_rows(&[[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]).unwrap();
        let (m, trace) = boost(&x, &[0, 1, 1, 0], 5);
        assert!(m.is_empty() && trace.is_empty());
        assert_eq!(m.score(&[0.0, 0.0]), 0.5);
    }
}
