//! Experiment configuration and its flat `key = value` file format.
//!
//! ```text
//! # comment
//! data_path = data/processed.cleveland.data
//! fs_methods = anova, chi2, mi
//! models = logistic, knn
//! knn.k = 7
//! logistic.one_hot = false
//! ```

use std::path::{Path, PathBuf};

use cardio_fs_core::selection::PAdjust;
use cardio_fs_core::{ClassifierKind, ClassifierSpec, Probability, SelectionMethod, SelectionOptions};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionScope {
    PerFold,
    FullDataset,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    Kfold { k: usize },
    Holdout { fraction: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Markdown,
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s.to_ascii_lowercase().as_str() {
            "md" | "markdown" => Some(Format::Markdown),
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub data_path: PathBuf,
    pub fs_methods: Vec<SelectionMethod>,
    pub alpha: f64,
    pub mi_m: usize,
    pub mi_bins: usize,
    pub selection_scope: SelectionScope,
    pub models: Vec<ClassifierSpec>,
    pub protocol: Protocol,
    pub seed: u64,
    pub scaling: bool,
    pub bonferroni: bool,
    pub format: Format,
    pub output: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value {value:?} for {key}")]
    BadValue { line: usize, key: String, value: String },
    #[error("{0}")]
    Invalid(String),
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            data_path: PathBuf::from("data/processed.cleveland.data"),
            fs_methods: vec![SelectionMethod::Anova, SelectionMethod::Chi2, SelectionMethod::Mi],
            alpha: 0.05,
            mi_m: 10,
            mi_bins: 10,
            selection_scope: SelectionScope::PerFold,
            models: ClassifierKind::ALL.iter().map(|&k| ClassifierSpec::new(k)).collect(),
            protocol: Protocol::Kfold { k: 10 },
            seed: 42,
            scaling: false,
            bonferroni: false,
            format: Format::Markdown,
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = ExperimentConfig::default();
        let mut folds = None;
        let mut fraction = None;
        let mut holdout = false;
        let mut overrides: Vec<(usize, String, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || ConfigError::BadValue { line, key: key.into(), value: value.into() };
            match key {
                "data_path" => cfg.data_path = PathBuf::from(value),
                "fs_methods" => cfg.fs_methods = parse_methods(value).ok_or_else(bad)?,
                "alpha" => cfg.alpha = value.parse().map_err(|_| bad())?,
                "mi_m" => cfg.mi_m = value.parse().map_err(|_| bad())?,
                "mi_bins" => cfg.mi_bins = value.parse().map_err(|_| bad())?,
                "selection_scope" => {
                    cfg.selection_scope = match value {
                        "per_fold" => SelectionScope::PerFold,
                        "full_dataset" => SelectionScope::FullDataset,
                        _ => return Err(bad()),
                    }
                }
                "models" => cfg.models = parse_models(value).ok_or_else(bad)?,
                "protocol" => {
                    holdout = match value {
                        "kfold" => false,
                        "holdout" => true,
                        _ => return Err(bad()),
                    }
                }
                "folds" => folds = Some(value.parse().map_err(|_| bad())?),
                "holdout_fraction" => fraction = Some(value.parse().map_err(|_| bad())?),
                "seed" => cfg.seed = value.parse().map_err(|_| bad())?,
                "scaling" => cfg.scaling = parse_bool(value).ok_or_else(bad)?,
                "bonferroni" => cfg.bonferroni = parse_bool(value).ok_or_else(bad)?,
                "format" => cfg.format = Format::parse(value).ok_or_else(bad)?,
                "output" => cfg.output = Some(PathBuf::from(value)),
                k if k.contains('.') => overrides.push((line, key.into(), value.into())),
                _ => return Err(ConfigError::UnknownKey { line, key: key.into() }),
            }
        }
        cfg.protocol = if holdout {
            Protocol::Holdout { fraction: fraction.unwrap_or(0.2) }
        } else {
            Protocol::Kfold { k: folds.unwrap_or(10) }
        };
        for (line, key, value) in overrides {
            cfg.apply_override(&key, &value).map_err(|e| match e {
                ConfigError::Invalid(msg) => ConfigError::Invalid(format!("line {line}: {msg}")),
                other => other,
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies `kind.param = value` to the matching model.
    pub fn apply_override(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let (kind, param) = key.split_once('.').ok_or_else(|| ConfigError::Invalid(format!("bad key {key:?}")))?;
        let kind = ClassifierKind::parse(kind)
            .ok_or_else(|| ConfigError::Invalid(format!("unknown model {kind:?}")))?;
        let spec = self
            .models
            .iter_mut()
            .find(|s| s.kind == kind)
            .ok_or_else(|| ConfigError::Invalid(format!("{key} set but {kind} is not in models")))?;
        if param == "one_hot" {
            let on = parse_bool(value).ok_or_else(|| ConfigError::Invalid(format!("bad boolean {value:?} for {key}")))?;
            spec.one_hot = on;
            return Ok(());
        }
        let v: f64 = value
            .parse()
            .map_err(|_| ConfigError::Invalid(format!("bad number {value:?} for {key}")))?;
        spec.set(param, v).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    /// Checks everything that does not need the data.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.fs_methods.is_empty() {
            return Err(ConfigError::Invalid("fs_methods is empty".into()));
        }
        if self.models.is_empty() {
            return Err(ConfigError::Invalid("models is empty".into()));
        }
        if Probability::new(self.alpha).is_none() {
            return Err(ConfigError::Invalid(format!("alpha {} is outside [0, 1]", self.alpha)));
        }
        if self.mi_bins < 2 {
            return Err(ConfigError::Invalid("mi_bins must be at least 2".into()));
        }
        match self.protocol {
            Protocol::Kfold { k } if k < 2 => Err(ConfigError::Invalid(format!("folds = {k}; need at least 2"))),
            Protocol::Holdout { fraction } if !(fraction > 0.0 && fraction < 1.0) => {
                Err(ConfigError::Invalid(format!("holdout_fraction {fraction} must lie in (0, 1)")))
            }
            _ => Ok(()),
        }
    }

    pub fn selection_options(&self) -> SelectionOptions {
        SelectionOptions {
            alpha: Probability::new(self.alpha).unwrap_or(Probability::ZERO),
            adjust: if self.bonferroni { PAdjust::Bonferroni } else { PAdjust::Identity },
            mi_m: self.mi_m,
            mi_bins: self.mi_bins,
            pass_through: true,
        }
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "on" | "yes" | "1" => Some(true),
        "false" | "off" | "no" | "0" => Some(false),
        _ => None,
    }
}

fn list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

pub fn parse_methods(s: &str) -> Option<Vec<SelectionMethod>> {
    let mut out: Vec<SelectionMethod> = Vec::new();
    for t in list(s) {
        let m = SelectionMethod::parse(t)?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    Some(out)
}

pub fn parse_models(s: &str) -> Option<Vec<ClassifierSpec>> {
    let mut out: Vec<ClassifierSpec> = Vec::new();
    for t in list(s) {
        let k = ClassifierKind::parse(t)?;
        if !out.iter().any(|s| s.kind == k) {
            out.push(ClassifierSpec::new(k));
        }
    }
    Some(out)
}
