//! Confusion counts, threshold metrics and rank-based ROC-AUC.

use alloc::vec::Vec;
use core::ops::{Add, AddAssign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum MetricsError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty input")]
    Empty,
    #[error("AUC is undefined when the truth contains a single class")]
    SingleClass,
    #[error("label {0} is not binary")]
    NonBinaryLabel(u8),
    #[error("score is NaN")]
    NanScore,
}

/// 2x2 cross-tabulation with class 1 as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[cfg_attr(feature = "serde", serde(rename = "fn"))]
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    /// Names of the metrics whose denominator is zero for these counts.
    pub fn undefined_metrics(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.tp + self.fp == 0 {
            out.push("precision");
        }
        if self.tp + self.fn_ == 0 {
            out.push("recall");
        }
        if self.tn + self.fp == 0 {
            out.push("specificity");
        }
        // the harmonic mean is 0/0 whenever precision and recall are both 0
        if self.tp == 0 {
            out.push("f1");
        }
        out
    }
}

impl Add for ConfusionMatrix {
    type Output = ConfusionMatrix;

    fn add(self, o: ConfusionMatrix) -> ConfusionMatrix {
        ConfusionMatrix {
            tp: self.tp + o.tp,
            fp: self.fp + o.fp,
            tn: self.tn + o.tn,
            fn_: self.fn_ + o.fn_,
        }
    }
}

impl AddAssign for ConfusionMatrix {
    fn add_assign(&mut self, o: ConfusionMatrix) {
        *self = *self + o;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricRecord {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub specificity: f64,
    pub f1: f64,
    /// `None` when the truth has a single class.
    pub roc_auc: Option<f64>,
}

fn check_binary(labels: &[u8]) -> Result<(), MetricsError> {
    match labels.iter().find(|&&l| l > 1) {
        Some(&l) => Err(MetricsError::NonBinaryLabel(l)),
        None => Ok(()),
    }
}

pub fn confusion(y_true: &[u8], y_pred: &[u8]) -> Result<ConfusionMatrix, MetricsError> {
    if y_true.len() != y_pred.len() {
        return Err(MetricsError::LengthMismatch { left: y_true.len(), right: y_pred.len() });
    }
    if y_true.is_empty() {
        return Err(MetricsError::Empty);
    }
    check_binary(y_true)?;
    check_binary(y_pred)?;
    let mut cm = ConfusionMatrix::default();
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t, p) {
            (1, 1) => cm.tp += 1,
            (0, 1) => cm.fp += 1,
            (0, 0) => cm.tn += 1,
            _ => cm.fn_ += 1,
        }
    }
    Ok(cm)
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Accuracy, precision, recall, specificity and F1. A zero denominator
/// yields 0; `roc_auc` is left empty.
pub fn classification_metrics(cm: &ConfusionMatrix) -> MetricRecord {
    let precision = ratio(cm.tp, cm.tp + cm.fp);
    let recall = ratio(cm.tp, cm.tp + cm.fn_);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    MetricRecord {
        accuracy: ratio(cm.tp + cm.tn, cm.total()),
        precision,
        recall,
        specificity: ratio(cm.tn, cm.tn + cm.fp),
        f1,
        roc_auc: None,
    }
}

/// Probability that a random positive outscores a random negative, ties
/// counting one half. Computed from midranks in `O(n log n)`.
pub fn roc_auc(scores: &[f64], y_true: &[u8]) -> Result<f64, MetricsError> {
    if scores.len() != y_true.len() {
        return Err(MetricsError::LengthMismatch { left: scores.len(), right: y_true.len() });
    }
    check_binary(y_true)?;
    if scores.iter().any(|s| s.is_nan()) {
        return Err(MetricsError::NanScore);
    }
    let n_pos = y_true.iter().filter(|&&t| t == 1).count();
    let n_neg = y_true.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(MetricsError::SingleClass);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // Twice the positive rank sum keeps midranks integral.
    let mut rank_sum2: u64 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        let pos_in_tie = order[i..j].iter().filter(|&&k| y_true[k] == 1).count() as u64;
        // ranks i+1 ..= j, midrank = (i + 1 + j) / 2
        rank_sum2 += pos_in_tie * (i as u64 + 1 + j as u64);
        i = j;
    }
    let (p, q) = (n_pos as u64, n_neg as u64);
    let u2 = rank_sum2 - p * (p + 1);
    Ok(u2 as f64 / (2 * p * q) as f64)
}
