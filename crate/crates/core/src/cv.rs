//! Seeded stratified fold assignment.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::math::round;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum FoldError {
    #[error("need at least 2 folds, got {0}")]
    TooFewFolds(usize),
    #[error("class {class} has {count} rows, fewer than the {required} required")]
    ClassTooSmall { class: u8, count: usize, required: usize },
    #[error("holdout fraction {0} must lie strictly between 0 and 1")]
    InvalidFraction(f64),
    #[error("label {0} is not binary")]
    NonBinaryLabel(u8),
}

fn class_indices(y: &[u8]) -> Result<[Vec<usize>; 2], FoldError> {
    let mut by_class = [Vec::new(), Vec::new()];
    for (i, &t) in y.iter().enumerate() {
        match t {
            0 | 1 => by_class[t as usize].push(i),
            other => return Err(FoldError::NonBinaryLabel(other)),
        }
    }
    Ok(by_class)
}

/// Assigns every row a fold in `0..k`, preserving the class ratio.
///
/// Rows of each class are shuffled and dealt round-robin; the second class
/// continues where the first stopped so fold sizes stay balanced.
pub fn stratified_kfold(y: &[u8], k: usize, seed: u64) -> Result<Vec<usize>, FoldError> {
    if k < 2 {
        return Err(FoldError::TooFewFolds(k));
    }
    let mut by_class = class_indices(y)?;
    for (c, idx) in by_class.iter().enumerate() {
        if idx.len() < k {
            return Err(FoldError::ClassTooSmall { class: c as u8, count: idx.len(), required: k });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![0; y.len()];
    let mut next = 0;
    for idx in by_class.iter_mut() {
        idx.shuffle(&mut rng);
        for &i in idx.iter() {
            folds[i] = next;
            next = (next + 1) % k;
        }
    }
    Ok(folds)
}

/// Single stratified split: `true` marks a test row. Each class contributes
/// `round(fraction * n_c)` test rows, at least one and at most `n_c - 1`.
pub fn stratified_holdout(y: &[u8], fraction: f64, seed: u64) -> Result<Vec<bool>, FoldError> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(FoldError::InvalidFraction(fraction));
    }
    let mut by_class = class_indices(y)?;
    for (c, idx) in by_class.iter().enumerate() {
        if idx.len() < 2 {
            return Err(FoldError::ClassTooSmall { class: c as u8, count: idx.len(), required: 2 });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut test = vec![false; y.len()];
    for idx in by_class.iter_mut() {
        idx.shuffle(&mut rng);
        let n_test = (round(fraction * idx.len() as f64) as usize).clamp(1, idx.len() - 1);
        for &i in &idx[..n_test] {
            test[i] = true;
        }
    }
    Ok(test)
}
