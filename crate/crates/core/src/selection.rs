//! The three filter selectors (ANOVA F-test, chi-square, mutual information)
//! and dataset reduction to the kept features.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dataset::{Dataset, DatasetError};
use crate::math::{ln, sqrt};
use crate::special::Probability;
use crate::stats::{
    anova_f_test, chi_square_test, contingency_table, jarque_bera, level_codes, levene_test,
    mutual_information, residuals, StatsError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum SelectionMethod {
    Anova,
    Chi2,
    Mi,
    None,
}

impl SelectionMethod {
    pub const ALL: [SelectionMethod; 4] =
        [SelectionMethod::Anova, SelectionMethod::Chi2, SelectionMethod::Mi, SelectionMethod::None];

    pub fn name(self) -> &'static str {
        match self {
            SelectionMethod::Anova => "anova",
            SelectionMethod::Chi2 => "chi2",
            SelectionMethod::Mi => "mi",
            SelectionMethod::None => "none",
        }
    }

    /// Heading used in report tables.
    pub fn label(self) -> &'static str {
        match self {
            SelectionMethod::Anova => "ANOVA",
            SelectionMethod::Chi2 => "Chi-Square",
            SelectionMethod::Mi => "Mutual Information",
            SelectionMethod::None => "No selection",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        SelectionMethod::ALL.into_iter().find(|m| m.name().eq_ignore_ascii_case(s))
    }
}

impl core::fmt::Display for SelectionMethod {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Transform {
    Log,
    Sqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum FeatureStatus {
    Selected,
    Rejected,
    SkippedAssumptions,
    IneligibleKind,
    PassedThrough,
}

impl FeatureStatus {
    pub fn name(self) -> &'static str {
        match self {
            FeatureStatus::Selected => "selected",
            FeatureStatus::Rejected => "rejected",
            FeatureStatus::SkippedAssumptions => "skipped-assumptions",
            FeatureStatus::IneligibleKind => "ineligible-kind",
            FeatureStatus::PassedThrough => "passed-through",
        }
    }

    /// Whether the feature survives into the reduced dataset.
    pub fn is_kept(self) -> bool {
        matches!(self, FeatureStatus::Selected | FeatureStatus::PassedThrough)
    }
}

/// Multiple-testing adjustment applied to p-values before comparing with alpha.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum PAdjust {
    #[default]
    Identity,
    /// `min(1, p * m)` with `m` the number of features tested.
    Bonferroni,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureRecord {
    pub code: String,
    pub status: FeatureStatus,
    /// F for ANOVA, chi-square for the chi-square test.
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    /// p-value after the multiple-testing adjustment.
    pub p_adjusted: Option<f64>,
    pub mi_score: Option<f64>,
    pub transform: Option<Transform>,
    /// Jarque–Bera p-value of the residuals that were finally tested.
    pub normality_p: Option<f64>,
    pub levene_p: Option<f64>,
    pub note: Option<String>,
}

impl FeatureRecord {
    fn new(code: &str, status: FeatureStatus) -> Self {
        FeatureRecord {
            code: code.into(),
            status,
            statistic: None,
            p_value: None,
            p_adjusted: None,
            mi_score: None,
            transform: None,
            normality_p: None,
            levene_p: None,
            note: None,
        }
    }

    fn skipped(mut self, note: String) -> Self {
        self.status = FeatureStatus::SkippedAssumptions;
        self.note = Some(note);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SelectionResult {
    pub method: SelectionMethod,
    /// One record per feature, in schema order.
    pub per_feature: Vec<FeatureRecord>,
    /// Schema order for the p-value methods, descending score for MI.
    pub selected: Vec<String>,
    pub alpha: Option<f64>,
    pub m: Option<usize>,
    pub adjust: PAdjust,
}

impl SelectionResult {
    pub fn record(&self, code: &str) -> Option<&FeatureRecord> {
        self.per_feature.iter().find(|r| r.code == code)
    }

    /// Codes that survive reduction, in schema order.
    pub fn kept(&self) -> Vec<&str> {
        self.per_feature
            .iter()
            .filter(|r| r.status.is_kept())
            .map(|r| r.code.as_str())
            .collect()
    }

    /// Features ordered by descending MI score (MI results only).
    pub fn ranking(&self) -> Vec<&str> {
        let mut scored: Vec<&FeatureRecord> =
            self.per_feature.iter().filter(|r| r.mi_score.is_some()).collect();
        scored.sort_by(|a, b| b.mi_score.unwrap().total_cmp(&a.mi_score.unwrap()));
        scored.into_iter().map(|r| r.code.as_str()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SelectionOptions {
    pub alpha: Probability,
    pub adjust: PAdjust,
    pub mi_m: usize,
    pub mi_bins: usize,
    /// Keep features a method cannot test. When false they are marked
    /// ineligible and dropped by [`reduce_dataset`].
    pub pass_through: bool,
}

impl Default for SelectionOptions {
    fn default() -> Self {
        SelectionOptions {
            alpha: Probability::new(0.05).unwrap(),
            adjust: PAdjust::Identity,
            mi_m: 10,
            mi_bins: 10,
            pass_through: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SelectionError {
    #[error("target has a single class; selection needs both")]
    SingleClass,
    #[error("{transform:?} transform inapplicable: {detail}")]
    TransformInapplicable { transform: Transform, detail: &'static str },
    #[error("selection keeps no features")]
    EmptyReduction,
    #[error("selection refers to feature {0:?}, absent from the dataset")]
    UnknownFeature(String),
    #[error("feature {feature}: {source}")]
    Stats { feature: String, source: StatsError },
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}

/// Element-wise log or square root, refusing values outside the domain.
pub fn apply_transform(values: &[f64], transform: Transform) -> Result<Vec<f64>, SelectionError> {
    match transform {
        Transform::Log => {
            if values.iter().any(|&v| !(v > 0.0)) {
                return Err(SelectionError::TransformInapplicable {
                    transform,
                    detail: "log needs strictly positive values",
                });
            }
            Ok(values.iter().map(|&v| ln(v)).collect())
        }
        Transform::Sqrt => {
            if values.iter().any(|&v| !(v >= 0.0)) {
                return Err(SelectionError::TransformInapplicable {
                    transform,
                    detail: "sqrt needs non-negative values",
                });
            }
            Ok(values.iter().map(|&v| sqrt(v)).collect())
        }
    }
}

/// The transform tried on a feature whose residuals fail the normality check.
pub fn designated_transform(code: &str) -> Option<Transform> {
    match code {
        "CHOL" => Some(Transform::Log),
        "BRP" => Some(Transform::Sqrt),
        _ => None,
    }
}

// A zero p-value is an underflow floor, not certainty, so alpha = 0 keeps nothing.
fn significant(p: f64, alpha: f64) -> bool {
    alpha > 0.0 && p <= alpha
}

fn adjust(p: f64, how: PAdjust, tested: usize) -> f64 {
    match how {
        PAdjust::Identity => p,
        PAdjust::Bonferroni => (p * tested.max(1) as f64).min(1.0),
    }
}

fn check_two_classes(ds: &Dataset) -> Result<(), SelectionError> {
    let [neg, pos] = ds.class_counts();
    if neg == 0 || pos == 0 {
        Err(SelectionError::SingleClass)
    } else {
        Ok(())
    }
}

fn untestable(code: &str, opts: &SelectionOptions) -> FeatureRecord {
    let status = if opts.pass_through {
        FeatureStatus::PassedThrough
    } else {
        FeatureStatus::IneligibleKind
    };
    FeatureRecord::new(code, status)
}

/// Runs one selector over every feature of `ds`.
pub fn select(
    ds: &Dataset,
    method: SelectionMethod,
    opts: &SelectionOptions,
) -> Result<SelectionResult, SelectionError> {
    match method {
        SelectionMethod::Anova => anova(ds, opts),
        SelectionMethod::Chi2 => chi2(ds, opts),
        SelectionMethod::Mi => mi(ds, opts),
        SelectionMethod::None => Ok(SelectionResult {
            method,
            per_feature: ds
                .features()
                .iter()
                .map(|f| FeatureRecord::new(&f.code, FeatureStatus::PassedThrough))
                .collect(),
            selected: Vec::new(),
            alpha: None,
            m: None,
            adjust: PAdjust::Identity,
        }),
    }
}

pub fn select_anova(ds: &Dataset, alpha: Probability) -> Result<SelectionResult, SelectionError> {
    select(ds, SelectionMethod::Anova, &SelectionOptions { alpha, ..Default::default() })
}

pub fn select_chi2(ds: &Dataset, alpha: Probability) -> Result<SelectionResult, SelectionError> {
    select(ds, SelectionMethod::Chi2, &SelectionOptions { alpha, ..Default::default() })
}

pub fn select_mi(ds: &Dataset, m: usize, bins: usize) -> Result<SelectionResult, SelectionError> {
    select(
        ds,
        SelectionMethod::Mi,
        &SelectionOptions { mi_m: m, mi_bins: bins, ..Default::default() },
    )
}

fn finish(
    method: SelectionMethod,
    per_feature: Vec<FeatureRecord>,
    opts: &SelectionOptions,
) -> SelectionResult {
    let selected = per_feature
        .iter()
        .filter(|r| r.status == FeatureStatus::Selected)
        .map(|r| r.code.clone())
        .collect();
    SelectionResult {
        method,
        per_feature,
        selected,
        alpha: Some(opts.alpha.get()),
        m: None,
        adjust: opts.adjust,
    }
}

fn anova(ds: &Dataset, opts: &SelectionOptions) -> Result<SelectionResult, SelectionError> {
    check_two_classes(ds)?;
    let alpha = opts.alpha.get();
    let y = ds.target();
    let tested = ds.features().iter().filter(|f| f.kind.is_numerical()).count();
    let mut records = Vec::with_capacity(ds.n_features());
    for (j, f) in ds.features().iter().enumerate() {
        if !f.kind.is_numerical() {
            records.push(untestable(&f.code, opts));
            continue;
        }
        let mut rec = FeatureRecord::new(&f.code, FeatureStatus::Rejected);
        let mut x = ds.column_at(j);
        let stats_err = |source| SelectionError::Stats { feature: f.code.clone(), source };

        let mut normality = match jarque_bera(&residuals(&x, y).map_err(stats_err)?) {
            Ok(jb) => jb.p.get(),
            Err(e) => {
                records.push(rec.skipped(format!("normality check failed: {e}")));
                continue;
            }
        };
        if significant(normality, alpha) {
            let Some(t) = designated_transform(&f.code) else {
                rec.normality_p = Some(normality);
                records.push(rec.skipped("residuals not normal; no transform designated".into()));
                continue;
            };
            rec.transform = Some(t);
            x = match apply_transform(&x, t) {
                Ok(v) => v,
                Err(e) => {
                    records.push(rec.skipped(format!("{e}")));
                    continue;
                }
            };
            normality = match jarque_bera(&residuals(&x, y).map_err(stats_err)?) {
                Ok(jb) => jb.p.get(),
                Err(e) => {
                    records.push(rec.skipped(format!("normality check failed: {e}")));
                    continue;
                }
            };
            rec.normality_p = Some(normality);
            if significant(normality, alpha) {
                records.push(rec.skipped("residuals not normal after transform".into()));
                continue;
            }
        }
        rec.normality_p = Some(normality);

        match levene_test(&x, y) {
            Ok(lev) => {
                rec.levene_p = Some(lev.p.get());
                if significant(lev.p.get(), alpha) {
                    records.push(rec.skipped("group variances unequal".into()));
                    continue;
                }
            }
            Err(e) => {
                records.push(rec.skipped(format!("homoscedasticity check failed: {e}")));
                continue;
            }
        }

        match anova_f_test(&x, y) {
            Ok(a) => {
                let p = a.p.get();
                let adj = adjust(p, opts.adjust, tested);
                rec.statistic = Some(a.f);
                rec.p_value = Some(p);
                rec.p_adjusted = Some(adj);
                if significant(adj, alpha) {
                    rec.status = FeatureStatus::Selected;
                }
                records.push(rec);
            }
            Err(StatsError::ConstantFeature) => {
                rec.statistic = Some(0.0);
                rec.p_value = Some(1.0);
                rec.p_adjusted = Some(1.0);
                rec.note = Some("constant feature".into());
                records.push(rec);
            }
            Err(e) => records.push(rec.skipped(format!("{e}"))),
        }
    }
    Ok(finish(SelectionMethod::Anova, records, opts))
}

fn chi2(ds: &Dataset, opts: &SelectionOptions) -> Result<SelectionResult, SelectionError> {
    check_two_classes(ds)?;
    let alpha = opts.alpha.get();
    let y = ds.target_levels();
    let tested = ds.features().iter().filter(|f| f.kind.is_categorical()).count();
    let mut records = Vec::with_capacity(ds.n_features());
    for (j, f) in ds.features().iter().enumerate() {
        if !f.kind.is_categorical() {
            records.push(untestable(&f.code, opts));
            continue;
        }
        let stats_err = |source| SelectionError::Stats { feature: f.code.clone(), source };
        let x = level_codes(&ds.column_at(j)).map_err(stats_err)?;
        let table = contingency_table(&x, &y).map_err(stats_err)?;
        let mut rec = FeatureRecord::new(&f.code, FeatureStatus::Rejected);
        match chi_square_test(&table) {
            Ok(c) => {
                let p = c.p.get();
                let adj = adjust(p, opts.adjust, tested);
                rec.statistic = Some(c.statistic);
                rec.p_value = Some(p);
                rec.p_adjusted = Some(adj);
                if significant(adj, alpha) {
                    rec.status = FeatureStatus::Selected;
                }
                records.push(rec);
            }
            Err(e @ StatsError::TestInapplicable { .. }) => {
                records.push(rec.skipped(format!("{e}")));
            }
            Err(e) => return Err(stats_err(e)),
        }
    }
    Ok(finish(SelectionMethod::Chi2, records, opts))
}

fn mi(ds: &Dataset, opts: &SelectionOptions) -> Result<SelectionResult, SelectionError> {
    let y = ds.target_levels();
    let mut scores = Vec::with_capacity(ds.n_features());
    for (j, f) in ds.features().iter().enumerate() {
        let r = mutual_information(&ds.column_at(j), &y, f.kind, opts.mi_bins)
            .map_err(|source| SelectionError::Stats { feature: f.code.clone(), source })?;
        scores.push(r.score);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    // stable, so equal scores keep schema order
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let top = &order[..opts.mi_m.min(order.len())];
    let per_feature = ds
        .features()
        .iter()
        .enumerate()
        .map(|(j, f)| {
            let status = if top.contains(&j) {
                FeatureStatus::Selected
            } else {
                FeatureStatus::Rejected
            };
            let mut rec = FeatureRecord::new(&f.code, status);
            rec.mi_score = Some(scores[j]);
            rec
        })
        .collect();
    Ok(SelectionResult {
        method: SelectionMethod::Mi,
        per_feature,
        selected: top.iter().map(|&j| ds.features()[j].code.clone()).collect(),
        alpha: None,
        m: Some(opts.mi_m),
        adjust: PAdjust::Identity,
    })
}

/// Keeps the selected and passed-through features, in schema order.
pub fn reduce_dataset(ds: &Dataset, result: &SelectionResult) -> Result<Dataset, SelectionError> {
    for r in &result.per_feature {
        if ds.feature_index(&r.code).is_none() {
            return Err(SelectionError::UnknownFeature(r.code.clone()));
        }
    }
    let keep: Vec<usize> = ds
        .features()
        .iter()
        .enumerate()
        .filter(|(_, f)| result.record(&f.code).is_some_and(|r| r.status.is_kept()))
        .map(|(j, _)| j)
        .collect();
    if keep.is_empty() {
        return Err(SelectionError::EmptyReduction);
    }
    Ok(ds.select_features(&keep)?)
}
