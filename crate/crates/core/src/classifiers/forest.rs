//! Random forest: bagged Gini trees with per-split feature subsampling.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::tree::{class_fraction, Criterion, Grower, Tree, TreeParams};
use crate::math::{ceil, sqrt};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForestParams {
    pub n_trees: usize,
    pub bootstrap: bool,
    pub tree: TreeParams,
}

#[derive(Debug, Clone)]
pub struct ForestModel {
    trees: Vec<Tree>,
}

/// `ceil(sqrt(d))`, at least 1.
pub fn sqrt_features(d: usize) -> usize {
    (ceil(sqrt(d as f64)) as usize).max(1)
}

pub fn fit(x: &Matrix, y: &[u8], params: &ForestParams, seed: u64) -> ForestModel {
    let n = y.len();
    let target: Vec<f64> = y.iter().map(|&l| l as f64).collect();
    let weight = vec![1.0; n];
    let grower = Grower { x, target: &target, weight: &weight, criterion: Criterion::Gini, params: params.tree };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trees = (0..params.n_trees)
        .map(|_| {
            let rows: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            grower.grow(rows, &|idx| class_fraction(&target, &weight, idx), Some(&mut rng))
        })
        .collect();
    ForestModel { trees }
}

impl ForestModel {
    /// Fraction of trees voting for class 1.
    pub fn score(&self, row: &[f64]) -> f64 {
        let votes = self.trees.iter().filter(|t| t.predict_row(row) >= 0.5).count();
        votes as f64 / self.trees.len() as f64
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }
}
