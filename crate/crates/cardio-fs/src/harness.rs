//! The (selection method x model) grid under cross-validation.

use cardio_fs_core::cv::{stratified_holdout, stratified_kfold, FoldError};
use cardio_fs_core::matrix::Standardizer;
use cardio_fs_core::metrics::{classification_metrics, roc_auc};
use cardio_fs_core::selection::{reduce_dataset, select, SelectionError};
use cardio_fs_core::{
    fit, predict_label, predict_proba, ClassifierSpec, ConfusionMatrix, Dataset, SelectionMethod,
    SelectionOptions, SelectionResult,
};
use serde::{Deserialize, Serialize};

use crate::config::{ConfigError, ExperimentConfig, Protocol, SelectionScope};
use crate::load::{load_cleveland, LoadError};

pub const VERSION: &str = concat!("cardio-fs ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("fold assignment: {0}")]
    Folds(#[from] FoldError),
}

/// Train and test row indices of one fold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

pub fn splits(ds: &Dataset, protocol: Protocol, seed: u64) -> Result<Vec<Split>, FoldError> {
    let y = ds.target();
    match protocol {
        Protocol::Kfold { k } => {
            let folds = stratified_kfold(y, k, seed)?;
            Ok((0..k)
                .map(|f| {
                    let (test, train): (Vec<usize>, Vec<usize>) = (0..y.len()).partition(|&i| folds[i] == f);
                    Split { train, test }
                })
                .collect())
        }
        Protocol::Holdout { fraction } => {
            let mask = stratified_holdout(y, fraction, seed)?;
            let (test, train): (Vec<usize>, Vec<usize>) = (0..y.len()).partition(|&i| mask[i]);
            Ok(vec![Split { train, test }])
        }
    }
}

/// Runs selection on the training rows of `split` only.
pub fn select_in_fold(
    ds: &Dataset,
    split: &Split,
    method: SelectionMethod,
    opts: &SelectionOptions,
) -> Result<SelectionResult, SelectionError> {
    select(&ds.subset_rows(&split.train), method, opts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Ok,
    Failed,
}

/// One (model, selection method) cell. Accuracy and its spread are on the
/// 0-100 scale, the other metrics in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub model: String,
    pub model_label: String,
    pub fs_method: SelectionMethod,
    pub status: RowStatus,
    pub error: Option<String>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub specificity: Option<f64>,
    pub roc_auc: Option<f64>,
    pub f1: Option<f64>,
    pub accuracy: Option<f64>,
    pub accuracy_std: Option<f64>,
    pub confusion: Option<ConfusionMatrix>,
    pub undefined_metrics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionDetail {
    pub method: SelectionMethod,
    /// Selection over every row, for reference; with per-fold scope it does
    /// not feed any model.
    pub full_dataset: Option<SelectionResult>,
    /// Features kept in each fold, in schema order.
    pub per_fold_kept: Vec<Vec<String>>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: ExperimentConfig,
    pub rows_used: usize,
    pub dropped_rows: usize,
    pub selection: Vec<SelectionDetail>,
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn row(&self, model: &str, fs: SelectionMethod) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.model == model && r.fs_method == fs)
    }

    pub fn has_failures(&self) -> bool {
        self.rows.iter().any(|r| r.status == RowStatus::Failed)
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Report, HarnessError> {
    config.validate()?;
    let ds = load_cleveland(&config.data_path)?;
    run_on_dataset(config, &ds)
}

// splitmix64 finaliser
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn model_seed(seed: u64, fold: usize, model: usize) -> u64 {
    mix(mix(mix(seed) ^ fold as u64) ^ model as u64)
}

/// Per-fold training inputs after selection.
struct FoldData {
    train: Dataset,
    test: Dataset,
}

pub fn run_on_dataset(config: &ExperimentConfig, ds: &Dataset) -> Result<Report, HarnessError> {
    config.validate()?;
    let folds = splits(ds, config.protocol, config.seed)?;
    let opts = config.selection_options();
    let mut selection = Vec::new();
    let mut rows = Vec::new();
    for &method in &config.fs_methods {
        let full = select(ds, method, &opts);
        let prepared = prepare(ds, &folds, method, &opts, config.selection_scope, full.as_ref().ok());
        let (per_fold_kept, fold_data) = match prepared {
            Ok(p) => p,
            Err(msg) => {
                selection.push(SelectionDetail {
                    method,
                    full_dataset: full.as_ref().ok().cloned(),
                    per_fold_kept: Vec::new(),
                    error: Some(msg.clone()),
                });
                for spec in &config.models {
                    rows.push(failed_row(spec, method, msg.clone()));
                }
                continue;
            }
        };
        selection.push(SelectionDetail {
            method,
            full_dataset: full.as_ref().ok().cloned(),
            per_fold_kept,
            error: full.as_ref().err().map(|e| e.to_string()),
        });
        for (m, spec) in config.models.iter().enumerate() {
            rows.push(evaluate(spec, m, method, &folds, &fold_data, config, ds.rows()));
        }
    }
    Ok(Report {
        version: VERSION.into(),
        config: config.clone(),
        rows_used: ds.rows(),
        dropped_rows: ds.dropped_rows(),
        selection,
        rows,
    })
}

fn prepare(
    ds: &Dataset,
    folds: &[Split],
    method: SelectionMethod,
    opts: &SelectionOptions,
    scope: SelectionScope,
    full: Option<&SelectionResult>,
) -> Result<(Vec<Vec<String>>, Vec<FoldData>), String> {
    let mut kept = Vec::with_capacity(folds.len());
    let mut data = Vec::with_capacity(folds.len());
    for (f, split) in folds.iter().enumerate() {
        let result = match scope {
            SelectionScope::PerFold => select_in_fold(ds, split, method, opts)
                .map_err(|e| format!("{method} selection, fold {f}: {e}"))?,
            SelectionScope::FullDataset => full
                .cloned()
                .ok_or_else(|| format!("{method} selection on the full dataset failed"))?,
        };
        let reduced =
            reduce_dataset(ds, &result).map_err(|e| format!("{method} selection, fold {f}: {e}"))?;
        kept.push(reduced.features().iter().map(|s| s.code.clone()).collect());
        data.push(FoldData {
            train: reduced.subset_rows(&split.train),
            test: reduced.subset_rows(&split.test),
        });
    }
    Ok((kept, data))
}

fn failed_row(spec: &ClassifierSpec, fs: SelectionMethod, error: String) -> ReportRow {
    ReportRow {
        model: spec.kind.name().into(),
        model_label: spec.kind.display_name().into(),
        fs_method: fs,
        status: RowStatus::Failed,
        error: Some(error),
        precision: None,
        recall: None,
        specificity: None,
        roc_auc: None,
        f1: None,
        accuracy: None,
        accuracy_std: None,
        confusion: None,
        undefined_metrics: Vec::new(),
    }
}

fn evaluate(
    spec: &ClassifierSpec,
    model_index: usize,
    fs: SelectionMethod,
    folds: &[Split],
    data: &[FoldData],
    config: &ExperimentConfig,
    n: usize,
) -> ReportRow {
    let mut scores = vec![f64::NAN; n];
    let mut labels = vec![0u8; n];
    let mut truth = vec![0u8; n];
    let mut tested = vec![false; n];
    let mut fold_acc = Vec::with_capacity(folds.len());
    for (f, (split, fd)) in folds.iter().zip(data).enumerate() {
        let mut x_train = fd.train.design_matrix(spec.one_hot);
        let mut x_test = fd.test.design_matrix(spec.one_hot);
        if config.scaling {
            let s = Standardizer::fit(&x_train);
            x_train = s.transform(&x_train);
            x_test = s.transform(&x_test);
        }
        let seed = model_seed(config.seed, f, model_index);
        let fold_scores = match fit(spec, &x_train, fd.train.target(), seed)
            .and_then(|model| predict_proba(&model, &x_test))
        {
            Ok(s) => s,
            Err(e) => return failed_row(spec, fs, format!("{fs} / {} / fold {f}: {e}", spec.kind)),
        };
        let fold_labels = predict_label(&fold_scores, 0.5);
        let hits = fold_labels.iter().zip(fd.test.target()).filter(|(p, t)| p == t).count();
        fold_acc.push(hits as f64 / fold_labels.len() as f64);
        for (k, &i) in split.test.iter().enumerate() {
            scores[i] = fold_scores.as_slice()[k];
            labels[i] = fold_labels[k];
            truth[i] = fd.test.target()[k];
            tested[i] = true;
        }
    }
    let pick = |v: &[u8]| -> Vec<u8> { v.iter().zip(&tested).filter(|(_, &t)| t).map(|(&x, _)| x).collect() };
    let (y, yhat) = (pick(&truth), pick(&labels));
    let s: Vec<f64> = scores.iter().zip(&tested).filter(|(_, &t)| t).map(|(&x, _)| x).collect();
    let cm = match cardio_fs_core::metrics::confusion(&y, &yhat) {
        Ok(cm) => cm,
        Err(e) => return failed_row(spec, fs, format!("{fs} / {}: {e}", spec.kind)),
    };
    let m = classification_metrics(&cm);
    let std = (fold_acc.len() > 1).then(|| {
        let mean = fold_acc.iter().sum::<f64>() / fold_acc.len() as f64;
        let var = fold_acc.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (fold_acc.len() - 1) as f64;
        100.0 * var.sqrt()
    });
    ReportRow {
        model: spec.kind.name().into(),
        model_label: spec.kind.display_name().into(),
        fs_method: fs,
        status: RowStatus::Ok,
        error: None,
        precision: Some(m.precision),
        recall: Some(m.recall),
        specificity: Some(m.specificity),
        roc_auc: roc_auc(&s, &y).ok(),
        f1: Some(m.f1),
        accuracy: Some(100.0 * m.accuracy),
        accuracy_std: std,
        confusion: Some(cm),
        undefined_metrics: cm.undefined_metrics().into_iter().map(String::from).collect(),
    }
}
