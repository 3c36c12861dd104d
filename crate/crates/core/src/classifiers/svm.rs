//! Linear SVM: hinge loss with L2 penalty, trained by full-batch subgradient
//! descent with step `learning_rate / sqrt(epoch)`. The bias is unpenalised.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{sigmoid, sqrt};
use crate::matrix::{dot, Matrix};

#[derive(Debug, Clone)]
pub struct SvmModel {
    w: Vec<f64>,
    b: f64,
}

impl SvmModel {
    pub fn margin(&self, row: &[f64]) -> f64 {
        dot(&self.w, row) + self.b
    }

    pub fn score(&self, row: &[f64]) -> f64 {
        sigmoid(self.margin(row))
    }
}

fn objective(m: &SvmModel, x: &Matrix, s: &[f64], lambda: f64) -> f64 {
    let hinge: f64 = x.iter_rows().zip(s).map(|(r, &si)| (1.0 - si * m.margin(r)).max(0.0)).sum();
    0.5 * lambda * dot(&m.w, &m.w) + hinge / s.len() as f64
}

/// Returns the model and its final regularised hinge objective.
pub fn fit(x: &Matrix, y: &[u8], lambda: f64, learning_rate: f64, epochs: usize) -> (SvmModel, f64) {
    let n = y.len() as f64;
    let s: Vec<f64> = y.iter().map(|&l| if l == 1 { 1.0 } else { -1.0 }).collect();
    let mut m = SvmModel { w: vec![0.0; x.cols()], b: 0.0 };
    let mut gw = vec![0.0; x.cols()];
    for epoch in 1..=epochs {
        let step = learning_rate / sqrt(epoch as f64);
        gw.iter_mut().zip(&m.w).for_each(|(g, w)| *g = lambda * w);
        let mut gb = 0.0;
        for (r, &si) in x.iter_rows().zip(&s) {
            if si * m.margin(r) < 1.0 {
                for (g, v) in gw.iter_mut().zip(r) {
                    *g -= si * v / n;
                }
                gb -= si / n;
            }
        }
        m.w.iter_mut().zip(&gw).for_each(|(w, g)| *w -= step * g);
        m.b -= step * gb;
    }
    let loss = objective(&m, x, &s, lambda);
    (m, loss)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separates_a_line() {
        let x = Matrix::column_vector(&[-2.0, -1.0, 1.0, 2.0]);
        let (m, _) = fit(&x, &[0, 0, 1, 1], 0.01, 0.1, 1000);
        assert!(m.margin(&[-1.0]) < 0.0 && m.margin(&[1.0]) > 0.0);
    }
}
