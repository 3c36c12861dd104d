//! One-hidden-layer perceptron: ReLU hidden units, sigmoid output,
//! cross-entropy loss, full-batch gradient descent.
//!
//! As with logistic regression, inputs are standardised on the training rows.
//! Parameters live in one flat vector laid out as `[W1 (h x d, row-major),
//! b1 (h), w2 (h), b2]`.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Objective;
use crate::math::{sigmoid, softplus, sqrt};
use crate::matrix::{Matrix, Standardizer};

#[derive(Debug, Clone)]
pub struct MlpModel {
    scaler: Standardizer,
    hidden: usize,
    params: Vec<f64>,
}

impl MlpModel {
    pub fn score(&self, row: &[f64]) -> f64 {
        let mut z = vec![0.0; row.len()];
        self.scaler.transform_row(row, &mut z);
        let mut h = vec![0.0; self.hidden];
        sigmoid(forward(&self.params, &z, self.hidden, &mut h))
    }
}

// Output pre-activation; fills `pre` with hidden pre-activations.
fn forward(p: &[f64], x: &[f64], hidden: usize, pre: &mut [f64]) -> f64 {
    let d = x.len();
    let (w1, rest) = p.split_at(hidden * d);
    let (b1, rest) = rest.split_at(hidden);
    let (w2, b2) = rest.split_at(hidden);
    let mut out = b2[0];
    for k in 0..hidden {
        let a = b1[k] + w1[k * d..(k + 1) * d].iter().zip(x).map(|(w, v)| w * v).sum::<f64>();
        pre[k] = a;
        out += w2[k] * a.max(0.0);
    }
    out
}

pub fn param_count(inputs: usize, hidden: usize) -> usize {
    hidden * inputs + 2 * hidden + 1
}

/// Mean cross-entropy of the network over a training set.
pub struct MlpObjective<'a> {
    pub x: &'a Matrix,
    pub y: &'a [u8],
    pub hidden: usize,
}

impl Objective for MlpObjective<'_> {
    fn dim(&self) -> usize {
        param_count(self.x.cols(), self.hidden)
    }

    fn loss(&self, p: &[f64]) -> f64 {
        let mut pre = vec![0.0; self.hidden];
        let total: f64 = self
            .x
            .iter_rows()
            .zip(self.y)
            .map(|(r, &t)| {
                let o = forward(p, r, self.hidden, &mut pre);
                softplus(o) - t as f64 * o
            })
            .sum();
        total / self.y.len() as f64
    }

    fn gradient(&self, p: &[f64]) -> Vec<f64> {
        let (d, h) = (self.x.cols(), self.hidden);
        let n = self.y.len() as f64;
        let mut g = vec![0.0; self.dim()];
        let mut pre = vec![0.0; h];
        let w2 = &p[h * d + h..h * d + 2 * h];
        for (r, &t) in self.x.iter_rows().zip(self.y) {
            let delta = sigmoid(forward(p, r, h, &mut pre)) - t as f64;
            let (gw1, rest) = g.split_at_mut(h * d);
            let (gb1, rest) = rest.split_at_mut(h);
            let (gw2, gb2) = rest.split_at_mut(h);
            gb2[0] += delta;
            for k in 0..h {
                gw2[k] += delta * pre[k].max(0.0);
                if pre[k] > 0.0 {
                    let back = delta * w2[k];
                    gb1[k] += back;
                    for (gw, v) in gw1[k * d..(k + 1) * d].iter_mut().zip(r) {
                        *gw += back * v;
                    }
                }
            }
        }
        g.iter_mut().for_each(|v| *v /= n);
        g
    }
}

/// Uniform `(-1, 1) / sqrt(fan_in)` weights, zero biases.
pub fn init_params(inputs: usize, hidden: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = vec![0.0; param_count(inputs, hidden)];
    let s1 = 1.0 / sqrt(inputs.max(1) as f64);
    let s2 = 1.0 / sqrt(hidden as f64);
    for w in &mut p[..hidden * inputs] {
        *w = rng.random_range(-1.0..1.0) * s1;
    }
    let w2 = hidden * inputs + hidden;
    for w in &mut p[w2..w2 + hidden] {
        *w = rng.random_range(-1.0..1.0) * s2;
    }
    p
}

pub fn fit(
    x: &Matrix,
    y: &[u8],
    hidden: usize,
    learning_rate: f64,
    epochs: usize,
    seed: u64,
) -> (MlpModel, f64) {
    let scaler = Standardizer::fit(x);
    let z = scaler.transform(x);
    let obj = MlpObjective { x: &z, y, hidden };
    let mut params = init_params(x.cols(), hidden, seed);
    for _ in 0..epochs {
        let g = obj.gradient(&params);
        params.iter_mut().zip(&g).for_each(|(p, g)| *p -= learning_rate * g);
    }
    let loss = obj.loss(&params);
    (MlpModel { scaler, hidden, params }, loss)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_is_seeded() {
        assert_eq!(init_params(3, 4, 1), init_params(3, 4, 1));
        assert_ne!(init_params(3, 4, 1), init_params(3, 4, 2));
        let p = init_params(4, 2, 0);
        assert!(p[..8].iter().all(|w| w.abs() < 0.5));
    }

    #[test]
    fn training_lowers_loss() {
        let x = Matrix::column_vector(&[-2.0, -1.0, 1.0, 2.0]);
        let y = [0, 0, 1, 1];
        let (_, l1) = fit(&x, &y, 8, 0.1, 1, 3);
        let (m, l) = fit(&x, &y, 8, 0.1, 2000, 3);
        assert!(l < l1);
        assert!(m.score(&[2.0]) > m.score(&[-2.0]));
    }
}
