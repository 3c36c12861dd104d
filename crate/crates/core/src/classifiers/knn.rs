//! k-nearest neighbours by Euclidean distance.

use alloc::vec::Vec;

use crate::matrix::Matrix;

#[derive(Debug, Clone)]
pub struct KnnModel {
    x: Matrix,
    y: Vec<u8>,
    k: usize,
}

pub fn fit(x: &Matrix, y: &[u8], k: usize) -> KnnModel {
    KnnModel { x: x.clone(), y: y.to_vec(), k: k.min(y.len()).max(1) }
}

impl KnnModel {
    /// Fraction of class 1 among the `k` nearest training rows. Equal
    /// distances are resolved in favour of the lower row index.
    pub fn score(&self, row: &[f64]) -> f64 {
        let mut dist: Vec<(f64, usize)> = self
            .x
            .iter_rows()
            .enumerate()
            .map(|(i, r)| (r.iter().zip(row).map(|(a, b)| (a - b) * (a - b)).sum(), i))
            .collect();
        dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let pos = dist[..self.k].iter().filter(|(_, i)| self.y[*i] == 1).count();
        pos as f64 / self.k as f64
    }
}
