//! Statistical tests behind the three filter selectors: residuals and the
//! normality / homoscedasticity checks, one-way ANOVA, the chi-square test of
//! independence and plug-in mutual information.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::FeatureKind;
use crate::math::{ln, round};
use crate::special::{chi_square_sf, f_sf, Probability, SpecialError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("length mismatch: {left} values vs {right} labels")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty input")]
    Empty,
    #[error("need at least {required} samples, found {found}")]
    TooFewSamples { required: usize, found: usize },
    #[error("need at least 2 groups, found {found}")]
    TooFewGroups { found: usize },
    #[error("every group needs at least {required} samples; smallest has {found}")]
    GroupTooSmall { required: usize, found: usize },
    #[error("zero variance: the sample is degenerate")]
    DegenerateVariance,
    #[error("feature is constant across all groups")]
    ConstantFeature,
    #[error("test inapplicable: table is {rows}x{cols} after pruning empty margins")]
    TestInapplicable { rows: usize, cols: usize },
    #[error("contingency table rows have unequal lengths")]
    RaggedTable,
    #[error("numerical variables need at least 2 bins, got {0}")]
    InvalidBins(usize),
    #[error("value {0} is not an integer level code")]
    NonIntegerLevel(f64),
    #[error("non-finite value in input")]
    NonFinite,
    #[error(transparent)]
    Special(#[from] SpecialError),
}

fn check_lengths(left: usize, right: usize) -> Result<(), StatsError> {
    if left != right {
        return Err(StatsError::LengthMismatch { left, right });
    }
    if left == 0 {
        return Err(StatsError::Empty);
    }
    Ok(())
}

fn check_finite(values: &[f64]) -> Result<(), StatsError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(StatsError::NonFinite)
    }
}

/// Splits `values` by label, groups ordered by label.
pub fn group_by<L: Ord + Copy>(values: &[f64], labels: &[L]) -> Result<BTreeMap<L, Vec<f64>>, StatsError> {
    check_lengths(values.len(), labels.len())?;
    let mut groups: BTreeMap<L, Vec<f64>> = BTreeMap::new();
    for (&v, &l) in values.iter().zip(labels) {
        groups.entry(l).or_default().push(v);
    }
    Ok(groups)
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn all_equal(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[0] == w[1])
}

/// Each value minus the mean of its class.
pub fn residuals<L: Ord + Copy>(values: &[f64], labels: &[L]) -> Result<Vec<f64>, StatsError> {
    check_lengths(values.len(), labels.len())?;
    check_finite(values)?;
    let means: BTreeMap<L, f64> = group_by(values, labels)?
        .into_iter()
        .map(|(l, g)| (l, mean(&g)))
        .collect();
    Ok(values
        .iter()
        .zip(labels)
        .map(|(v, l)| v - means[l])
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct JarqueBera {
    pub statistic: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub p: Probability,
}

/// Jarque–Bera normality test with population-moment skewness and kurtosis.
pub fn jarque_bera(residuals: &[f64]) -> Result<JarqueBera, StatsError> {
    let n = residuals.len();
    if n < 3 {
        return Err(StatsError::TooFewSamples { required: 3, found: n });
    }
    check_finite(residuals)?;
    if all_equal(residuals) {
        return Err(StatsError::DegenerateVariance);
    }
    let m = mean(residuals);
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &r in residuals {
        let d = r - m;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let nf = n as f64;
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    if !(m2 > 0.0) {
        return Err(StatsError::DegenerateVariance);
    }
    let skewness = m3 / (m2 * crate::math::sqrt(m2));
    let excess_kurtosis = m4 / (m2 * m2) - 3.0;
    let statistic = nf / 6.0 * (skewness * skewness + excess_kurtosis * excess_kurtosis / 4.0);
    Ok(JarqueBera {
        statistic,
        skewness,
        excess_kurtosis,
        p: chi_square_sf(statistic, 2)?,
    })
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LeveneResult {
    pub w: f64,
    pub p: Probability,
}

/// Levene's test in the median-centred (Brown–Forsythe) form.
///
/// Degenerate inputs saturate: zero spread everywhere gives `w = 0, p = 1`;
/// zero within-group spread with between-group spread gives `w = inf, p = 0`.
pub fn levene_test<L: Ord + Copy>(values: &[f64], labels: &[L]) -> Result<LeveneResult, StatsError> {
    check_finite(values)?;
    let groups = group_by(values, labels)?;
    if groups.len() < 2 {
        return Err(StatsError::TooFewGroups { found: groups.len() });
    }
    let smallest = groups.values().map(Vec::len).min().unwrap_or(0);
    if smallest < 2 {
        return Err(StatsError::GroupTooSmall { required: 2, found: smallest });
    }
    let deviations: Vec<Vec<f64>> = groups
        .into_values()
        .map(|mut g| {
            let med = median(&mut g);
            g.iter().map(|x| (x - med).abs()).collect()
        })
        .collect();
    let (ssb, ssw, df_b, df_w) = sums_of_squares(&deviations);
    if ssw == 0.0 {
        return Ok(if ssb == 0.0 {
            LeveneResult { w: 0.0, p: Probability::ONE }
        } else {
            LeveneResult { w: f64::INFINITY, p: Probability::ZERO }
        });
    }
    let w = (ssb / df_b as f64) / (ssw / df_w as f64);
    Ok(LeveneResult { w, p: f_sf(w, df_b as u32, df_w as u32)? })
}

// (SSB, SSW, dfB, dfW) for a set of non-empty groups.
fn sums_of_squares(groups: &[Vec<f64>]) -> (f64, f64, usize, usize) {
    let n: usize = groups.iter().map(Vec::len).sum();
    let grand = groups.iter().flatten().sum::<f64>() / n as f64;
    let mut ssb = 0.0;
    let mut ssw = 0.0;
    for g in groups {
        let m = mean(g);
        ssb += g.len() as f64 * (m - grand) * (m - grand);
        ssw += g.iter().map(|x| (x - m) * (x - m)).sum::<f64>();
    }
    (ssb, ssw, groups.len() - 1, n - groups.len())
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnovaResult {
    pub ssb: f64,
    pub ssw: f64,
    pub df_between: usize,
    pub df_within: usize,
    pub msb: f64,
    pub msw: f64,
    pub f: f64,
    pub p: Probability,
}

/// One-way ANOVA F-test of equal group means.
///
/// Zero within-group variance with distinct group means saturates to
/// `F = inf, p = 0`; a feature constant across every group is an error.
pub fn anova_f_test<L: Ord + Copy>(values: &[f64], labels: &[L]) -> Result<AnovaResult, StatsError> {
    check_finite(values)?;
    let groups: Vec<Vec<f64>> = group_by(values, labels)?.into_values().collect();
    if groups.len() < 2 {
        return Err(StatsError::TooFewGroups { found: groups.len() });
    }
    if values.len() <= groups.len() {
        return Err(StatsError::TooFewSamples {
            required: groups.len() + 1,
            found: values.len(),
        });
    }
    if all_equal(values) {
        return Err(StatsError::ConstantFeature);
    }
    let (ssb, ssw, df_between, df_within) = sums_of_squares(&groups);
    let msb = ssb / df_between as f64;
    let msw = ssw / df_within as f64;
    let (f, p) = if msw == 0.0 {
        if ssb == 0.0 {
            return Err(StatsError::ConstantFeature);
        }
        (f64::INFINITY, Probability::ZERO)
    } else {
        let f = msb / msw;
        (f, f_sf(f, df_between as u32, df_within as u32)?)
    };
    Ok(AnovaResult { ssb, ssw, df_between, df_within, msb, msw, f, p })
}

/// Observed counts over the level pairs of two discrete variables.
///
/// Rows are the feature's levels and columns the target's, both in ascending
/// code order. Tables built from data never contain an all-zero margin.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ContingencyTable {
    row_levels: Vec<i64>,
    col_levels: Vec<i64>,
    observed: Vec<Vec<u64>>,
    row_totals: Vec<u64>,
    col_totals: Vec<u64>,
    grand_total: u64,
}

impl ContingencyTable {
    /// Builds a table from raw counts; levels are numbered from zero.
    pub fn from_counts(observed: Vec<Vec<u64>>) -> Result<Self, StatsError> {
        let rows = observed.len();
        let cols = observed.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(StatsError::Empty);
        }
        if observed.iter().any(|r| r.len() != cols) {
            return Err(StatsError::RaggedTable);
        }
        Ok(Self::with_levels(
            (0..rows as i64).collect(),
            (0..cols as i64).collect(),
            observed,
        ))
    }

    fn with_levels(row_levels: Vec<i64>, col_levels: Vec<i64>, observed: Vec<Vec<u64>>) -> Self {
        let row_totals: Vec<u64> = observed.iter().map(|r| r.iter().sum()).collect();
        let mut col_totals = vec![0u64; col_levels.len()];
        for row in &observed {
            for (t, &c) in col_totals.iter_mut().zip(row) {
                *t += c;
            }
        }
        let grand_total = row_totals.iter().sum();
        ContingencyTable { row_levels, col_levels, observed, row_totals, col_totals, grand_total }
    }

    pub fn rows(&self) -> usize {
        self.observed.len()
    }

    pub fn cols(&self) -> usize {
        self.col_levels.len()
    }

    pub fn observed(&self) -> &[Vec<u64>] {
        &self.observed
    }

    pub fn row_levels(&self) -> &[i64] {
        &self.row_levels
    }

    pub fn col_levels(&self) -> &[i64] {
        &self.col_levels
    }

    pub fn row_totals(&self) -> &[u64] {
        &self.row_totals
    }

    pub fn col_totals(&self) -> &[u64] {
        &self.col_totals
    }

    pub fn grand_total(&self) -> u64 {
        self.grand_total
    }

    /// Drops every all-zero row and column.
    pub fn pruned(&self) -> ContingencyTable {
        let keep_rows: Vec<usize> = (0..self.rows()).filter(|&i| self.row_totals[i] > 0).collect();
        let keep_cols: Vec<usize> = (0..self.cols()).filter(|&j| self.col_totals[j] > 0).collect();
        let observed = keep_rows
            .iter()
            .map(|&i| keep_cols.iter().map(|&j| self.observed[i][j]).collect())
            .collect();
        Self::with_levels(
            keep_rows.iter().map(|&i| self.row_levels[i]).collect(),
            keep_cols.iter().map(|&j| self.col_levels[j]).collect(),
            observed,
        )
    }
}

/// Cross-tabulates two level sequences.
pub fn contingency_table(x: &[i64], y: &[i64]) -> Result<ContingencyTable, StatsError> {
    check_lengths(x.len(), y.len())?;
    let mut counts: BTreeMap<(i64, i64), u64> = BTreeMap::new();
    let mut row_levels: Vec<i64> = x.to_vec();
    let mut col_levels: Vec<i64> = y.to_vec();
    row_levels.sort_unstable();
    row_levels.dedup();
    col_levels.sort_unstable();
    col_levels.dedup();
    for (&a, &b) in x.iter().zip(y) {
        *counts.entry((a, b)).or_insert(0) += 1;
    }
    let observed = row_levels
        .iter()
        .map(|&a| {
            col_levels
                .iter()
                .map(|&b| counts.get(&(a, b)).copied().unwrap_or(0))
                .collect()
        })
        .collect();
    Ok(ContingencyTable::with_levels(row_levels, col_levels, observed))
}

/// Expected counts under independence: `E_ij = R_i * C_j / N`.
pub fn expected_frequencies(table: &ContingencyTable) -> Vec<Vec<f64>> {
    let n = table.grand_total as f64;
    table
        .row_totals
        .iter()
        .map(|&r| table.col_totals.iter().map(|&c| r as f64 * c as f64 / n).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Chi2Result {
    pub statistic: f64,
    pub df: usize,
    pub p: Probability,
    pub expected: Vec<Vec<f64>>,
}

/// Pearson chi-square test of independence, without continuity correction.
///
/// Empty margins are pruned first; a table with a single row or column left
/// carries no contrast and is rejected.
pub fn chi_square_test(table: &ContingencyTable) -> Result<Chi2Result, StatsError> {
    let table = table.pruned();
    if table.rows() < 2 || table.cols() < 2 {
        return Err(StatsError::TestInapplicable {
            rows: table.rows(),
            cols: table.cols(),
        });
    }
    let expected = expected_frequencies(&table);
    let mut statistic = 0.0;
    for (obs_row, exp_row) in table.observed.iter().zip(&expected) {
        for (&o, &e) in obs_row.iter().zip(exp_row) {
            let d = o as f64 - e;
            statistic += d * d / e;
        }
    }
    let df = (table.rows() - 1) * (table.cols() - 1);
    Ok(Chi2Result {
        statistic,
        df,
        p: chi_square_sf(statistic, df as u32)?,
        expected,
    })
}

/// Empirical joint and marginal distributions of two discrete variables.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EmpiricalJoint {
    pub x_levels: Vec<i64>,
    pub y_levels: Vec<i64>,
    pub joint_prob: Vec<Vec<f64>>,
    pub marginal_x: Vec<f64>,
    pub marginal_y: Vec<f64>,
    pub sample_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MiResult {
    /// Mutual information in nats.
    pub score: f64,
    /// Distinct cells used for (x, y).
    pub bins_used: (usize, usize),
    pub joint: EmpiricalJoint,
}

/// Equal-frequency discretisation into at most `bins` bins.
///
/// Cut points are the order statistics at `i * n / bins`; duplicate cuts are
/// merged, so tied values always share a bin and no bin is empty.
pub fn equal_frequency_bins(values: &[f64], bins: usize) -> Result<Vec<i64>, StatsError> {
    if bins < 2 {
        return Err(StatsError::InvalidBins(bins));
    }
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    check_finite(values)?;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut edges: Vec<f64> = (1..bins).map(|i| sorted[i * n / bins]).collect();
    edges.dedup();
    edges.retain(|&e| e > sorted[0]);
    Ok(values
        .iter()
        .map(|v| edges.partition_point(|&e| e <= *v) as i64)
        .collect())
}

/// Converts level codes stored as floats to integers.
pub fn level_codes(values: &[f64]) -> Result<Vec<i64>, StatsError> {
    values
        .iter()
        .map(|&v| {
            if v.is_finite() && round(v) == v {
                Ok(v as i64)
            } else {
                Err(StatsError::NonIntegerLevel(v))
            }
        })
        .collect()
}

/// Plug-in mutual information `sum P(x,y) ln[P(x,y) / (P(x)P(y))]`, in nats.
///
/// Numerical `x` is discretised with [`equal_frequency_bins`]; categorical and
/// binary `x` is used level by level. Empty cells contribute nothing.
pub fn mutual_information(
    x: &[f64],
    y: &[i64],
    x_kind: FeatureKind,
    bins: usize,
) -> Result<MiResult, StatsError> {
    check_lengths(x.len(), y.len())?;
    let codes = if x_kind.is_numerical() {
        equal_frequency_bins(x, bins)?
    } else {
        level_codes(x)?
    };
    discrete_mutual_information(&codes, y)
}

/// Plug-in mutual information of two discrete sequences, in nats.
pub fn discrete_mutual_information(x: &[i64], y: &[i64]) -> Result<MiResult, StatsError> {
    let table = contingency_table(x, y)?;
    let n = table.grand_total as f64;
    let mut score = 0.0;
    for (i, row) in table.observed.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let c = c as f64;
            let ratio = c * n / (table.row_totals[i] as f64 * table.col_totals[j] as f64);
            score += c / n * ln(ratio);
        }
    }
    let joint = EmpiricalJoint {
        joint_prob: table
            .observed
            .iter()
            .map(|r| r.iter().map(|&c| c as f64 / n).collect())
            .collect(),
        marginal_x: table.row_totals.iter().map(|&c| c as f64 / n).collect(),
        marginal_y: table.col_totals.iter().map(|&c| c as f64 / n).collect(),
        sample_count: table.grand_total as usize,
        x_levels: table.row_levels.clone(),
        y_levels: table.col_levels.clone(),
    };
    Ok(MiResult {
        score: score.max(0.0),
        bins_used: (table.rows(), table.cols()),
        joint,
    })
}
