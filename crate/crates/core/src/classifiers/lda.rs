//! Two-class linear discriminant analysis with a pooled, ridged covariance.

use alloc::vec;
use alloc::vec::Vec;

use super::ClassifierError;
use crate::math::{ln, sigmoid};
use crate::matrix::{cholesky_solve, dot, Matrix};

#[derive(Debug, Clone)]
pub struct LdaModel {
    w: Vec<f64>,
    c: f64,
}

impl LdaModel {
    pub fn score(&self, row: &[f64]) -> f64 {
        sigmoid(dot(&self.w, row) + self.c)
    }
}

pub fn fit(x: &Matrix, y: &[u8], ridge: f64) -> Result<LdaModel, ClassifierError> {
    let d = x.cols();
    let mut means = [vec![0.0; d], vec![0.0; d]];
    let mut counts = [0usize; 2];
    for (r, &l) in x.iter_rows().zip(y) {
        counts[l as usize] += 1;
        means[l as usize].iter_mut().zip(r).for_each(|(m, v)| *m += v);
    }
    for (m, &c) in means.iter_mut().zip(&counts) {
        m.iter_mut().for_each(|v| *v /= c as f64);
    }
    let mut cov = vec![0.0; d * d];
    let mut dev = vec![0.0; d];
    for (r, &l) in x.iter_rows().zip(y) {
        dev.iter_mut().zip(r).zip(&means[l as usize]).for_each(|((e, v), m)| *e = v - m);
        for i in 0..d {
            for j in 0..=i {
                cov[i * d + j] += dev[i] * dev[j];
            }
        }
    }
    let denom = (y.len().saturating_sub(2)).max(1) as f64;
    for i in 0..d {
        for j in 0..=i {
            let v = cov[i * d + j] / denom;
            cov[i * d + j] = v;
            cov[j * d + i] = v;
        }
        cov[i * d + i] += ridge;
    }
    let diff: Vec<f64> = means[1].iter().zip(&means[0]).map(|(a, b)| a - b).collect();
    let w = cholesky_solve(&cov, &diff)
        .ok_or(ClassifierError::Numerical("pooled covariance is not positive definite"))?;
    let mid: Vec<f64> = means[0].iter().zip(&means[1]).map(|(a, b)| 0.5 * (a + b)).collect();
    let c = -dot(&w, &mid) + ln(counts[1] as f64 / counts[0] as f64);
    Ok(LdaModel { w, c })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_classes_meet_at_midpoint() {
        let x = Matrix::column_vector(&[-3.0, -1.0, 1.0, 3.0]);
        let m = fit(&x, &[0, 0, 1, 1], 1e-6).unwrap();
        assert!((m.score(&[0.0]) - 0.5).abs() < 1e-12);
        assert!(m.score(&[2.0]) > 0.5);
    }
}
