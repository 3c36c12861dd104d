//! One PASS/FAIL line per acceptance criterion, at the stated tolerances.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use std::time::{Duration, Instant};

use cardio_fs::harness::{select_in_fold, splits};
use cardio_fs::{emit_report, load_cleveland, run_on_dataset, ExperimentConfig, Format, Protocol, Report};
use cardio_fs_core::classifiers::logistic::LogisticObjective;
use cardio_fs_core::classifiers::neural_net::{param_count, MlpObjective};
use cardio_fs_core::classifiers::Objective;
use cardio_fs_core::dataset::{Dataset, FeatureKind, FeatureSchema};
use cardio_fs_core::matrix::Standardizer;
use cardio_fs_core::selection::{select, FeatureStatus};
use cardio_fs_core::special::{chi_square_sf, f_sf, std_normal_cdf};
use cardio_fs_core::stats::{anova_f_test, chi_square_test, discrete_mutual_information, ContingencyTable};
use cardio_fs_core::{SelectionMethod, SelectionOptions};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/processed.cleveland.data");

struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn uniform(&mut self) -> f64 {
        (self.next() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn within(elapsed: Duration, budget_s: f64) -> bool {
    elapsed.as_secs_f64() < budget_s
}

fn cleveland() -> Dataset {
    load_cleveland(Path::new(DATA)).unwrap()
}

// Two-sided Student-t p-value from the finite cos-series for integer df.
fn t_two_sided(t: f64, df: u32) -> f64 {
    let theta = (t.abs() / (df as f64).sqrt()).atan();
    let (s, c) = theta.sin_cos();
    let c2 = c * c;
    let a = if df == 1 {
        2.0 * theta / PI
    } else if df.is_multiple_of(2) {
        let (mut term, mut sum) = (1.0, 1.0);
        let mut k = 1;
        while 2 * k + 2 <= df as usize {
            term *= (2 * k - 1) as f64 / (2 * k) as f64 * c2;
            sum += term;
            k += 1;
        }
        s * sum
    } else {
        let (mut term, mut sum) = (1.0, 1.0);
        let mut k = 1;
        while 2 * k + 3 <= df as usize {
            term *= (2 * k) as f64 / (2 * k + 1) as f64 * c2;
            sum += term;
            k += 1;
        }
        2.0 / PI * (theta + s * c * sum)
    };
    1.0 - a
}

fn special_functions() -> Outcome {
    let start = Instant::now();
    let chi = chi_square_sf(3.841459, 1).unwrap().get();
    let f = f_sf(7.7086, 1, 4).unwrap().get();
    let mut worst: f64 = 0.0;
    for i in 0..=1000 {
        let x = i as f64 * 0.05;
        worst = worst.max((chi_square_sf(x, 2).unwrap().get() - (-x / 2.0).exp()).abs());
    }
    for d in 1..=60 {
        for i in 0..=100 {
            let t = i as f64 * 0.08;
            worst = worst.max((f_sf(t * t, 1, d).unwrap().get() - t_two_sided(t, d)).abs());
        }
    }
    let elapsed = start.elapsed();
    let pass = (chi - 0.05).abs() < 1e-4 && (f - 0.05).abs() < 1e-4 && worst < 1e-9 && within(elapsed, 1.0);
    Outcome {
        id: "1",
        pass,
        detail: format!("chi2 sf {chi:.6}, F sf {f:.6}, worst identity error {worst:.2e}, {elapsed:.2?}"),
    }
}

fn chi_square_oracle() -> Outcome {
    let start = Instant::now();
    let (mut tables, mut worst) = (0, 0.0f64);
    let mut df_ok = true;
    for n in 1..=20u64 {
        for a in 0..=n {
            for b in 0..=n - a {
                for c in 0..=n - a - b {
                    let d = n - a - b - c;
                    let obs = [[a, b], [c, d]];
                    let rows = [a + b, c + d];
                    let cols = [a + c, b + d];
                    if rows.contains(&0) || cols.contains(&0) {
                        continue;
                    }
                    let mut stat = 0.0;
                    for i in 0..2 {
                        for j in 0..2 {
                            let e = rows[i] as f64 * cols[j] as f64 / n as f64;
                            stat += (obs[i][j] as f64 - e).powi(2) / e;
                        }
                    }
                    // one degree of freedom: P(chi2 > s) = erfc(sqrt(s / 2))
                    let p = libm::erfc((stat / 2.0).sqrt());
                    let t = ContingencyTable::from_counts(vec![vec![a, b], vec![c, d]]).unwrap();
                    let r = chi_square_test(&t).unwrap();
                    df_ok &= r.df == 1;
                    worst = worst.max((r.statistic - stat).abs()).max((r.p.get() - p).abs());
                    tables += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        id: "2",
        pass: df_ok && worst <= 1e-12 && within(elapsed, 10.0),
        detail: format!("{tables} tables, worst deviation {worst:.2e}, {elapsed:.2?}"),
    }
}

fn direct_mi(x: &[i64], y: &[i64]) -> f64 {
    let n = x.len() as f64;
    let mut joint = BTreeMap::new();
    let mut px = BTreeMap::new();
    let mut py = BTreeMap::new();
    for (&a, &b) in x.iter().zip(y) {
        *joint.entry((a, b)).or_insert(0.0) += 1.0 / n;
        *px.entry(a).or_insert(0.0) += 1.0 / n;
        *py.entry(b).or_insert(0.0) += 1.0 / n;
    }
    joint.iter().map(|(&(a, b), &p)| p * (p / (px[&a] * py[&b])).ln()).sum()
}

fn mi_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = Rng(3);
    let (mut worst, mut asym, mut min): (f64, f64, f64) = (0.0, 0.0, f64::INFINITY);
    for _ in 0..1000 {
        let n = 1 + rng.below(100) as usize;
        let kx = 1 + rng.below(6) as i64;
        let ky = 1 + rng.below(4) as i64;
        let x: Vec<i64> = (0..n).map(|_| rng.below(kx as u64) as i64).collect();
        // half the pairs carry dependence
        let y: Vec<i64> = x
            .iter()
            .map(|&v| if rng.uniform() < 0.5 { v % ky } else { rng.below(ky as u64) as i64 })
            .collect();
        let xy = discrete_mutual_information(&x, &y).unwrap().score;
        let yx = discrete_mutual_information(&y, &x).unwrap().score;
        worst = worst.max((xy - direct_mi(&x, &y)).abs());
        asym = asym.max((xy - yx).abs());
        min = min.min(xy).min(yx);
    }
    let elapsed = start.elapsed();
    Outcome {
        id: "3",
        pass: worst <= 1e-12 && asym <= 1e-12 && min >= 0.0 && within(elapsed, 5.0),
        detail: format!("oracle deviation {worst:.2e}, asymmetry {asym:.2e}, min MI {min:.2e}, {elapsed:.2?}"),
    }
}

fn anova_invariants() -> Outcome {
    let start = Instant::now();
    let mut rng = Rng(4);
    let (mut worst_ss, mut worst_t): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let n = 6 + rng.below(60) as usize;
        let groups = 2 + rng.below(3);
        let x: Vec<f64> = (0..n).map(|_| (rng.uniform() - 0.5) * 200.0).collect();
        let mut y: Vec<u8> = (0..n).map(|_| rng.below(groups) as u8).collect();
        y[0] = 0;
        y[1] = 1;
        let a = anova_f_test(&x, &y).unwrap();
        let m = x.iter().sum::<f64>() / n as f64;
        let sst: f64 = x.iter().map(|v| (v - m).powi(2)).sum();
        worst_ss = worst_ss.max(((a.ssb + a.ssw) - sst).abs() / sst);

        let y2: Vec<u8> = y.iter().map(|&g| g % 2).collect();
        let (g0, g1): (Vec<f64>, Vec<f64>) = {
            let g0 = x.iter().zip(&y2).filter(|(_, &g)| g == 0).map(|(&v, _)| v).collect();
            let g1 = x.iter().zip(&y2).filter(|(_, &g)| g == 1).map(|(&v, _)| v).collect();
            (g0, g1)
        };
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let ss = |v: &[f64], m: f64| v.iter().map(|z| (z - m).powi(2)).sum::<f64>();
        let sp2 = (ss(&g0, mean(&g0)) + ss(&g1, mean(&g1))) / (n - 2) as f64;
        let t = (mean(&g0) - mean(&g1)) / (sp2 * (1.0 / g0.len() as f64 + 1.0 / g1.len() as f64)).sqrt();
        let f = anova_f_test(&x, &y2).unwrap().f;
        worst_t = worst_t.max((f - t * t).abs() / f.abs().max(t * t));
    }
    let hand = anova_f_test(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], &[0, 0, 0, 1, 1, 1]).unwrap().f;
    let elapsed = start.elapsed();
    Outcome {
        id: "4",
        pass: worst_ss <= 1e-9 && worst_t <= 1e-9 && hand == 13.5 && within(elapsed, 5.0),
        detail: format!("SS decomposition {worst_ss:.2e}, F vs t^2 {worst_t:.2e}, hand F = {hand}, {elapsed:.2?}"),
    }
}

fn relative_gradient_error(obj: &dyn Objective, p: &[f64]) -> f64 {
    let g = obj.gradient(p);
    let h = 1e-6;
    let (mut diff, mut na, mut nn) = (0.0, 0.0, 0.0);
    for k in 0..p.len() {
        let mut a = p.to_vec();
        let mut b = p.to_vec();
        a[k] += h;
        b[k] -= h;
        let num = (obj.loss(&a) - obj.loss(&b)) / (2.0 * h);
        diff += (g[k] - num).powi(2);
        na += g[k] * g[k];
        nn += num * num;
    }
    diff.sqrt() / na.sqrt().max(nn.sqrt()).max(1e-300)
}

fn gradient_checks() -> Outcome {
    let start = Instant::now();
    let ds = cleveland().subset_rows(&(0..80).collect::<Vec<_>>());
    let raw = ds.design_matrix(true);
    let x = Standardizer::fit(&raw).transform(&raw);
    let y = ds.target();
    let mut rng = Rng(5);
    let (mut lr, mut nn): (f64, f64) = (0.0, 0.0);
    let logistic = LogisticObjective { x: &x, y };
    let mlp = MlpObjective { x: &x, y, hidden: 8 };
    for _ in 0..10 {
        let p: Vec<f64> = (0..logistic.dim()).map(|_| rng.uniform() - 0.5).collect();
        lr = lr.max(relative_gradient_error(&logistic, &p));
        let q: Vec<f64> = (0..param_count(x.cols(), 8)).map(|_| rng.uniform() - 0.5).collect();
        nn = nn.max(relative_gradient_error(&mlp, &q));
    }
    let elapsed = start.elapsed();
    Outcome {
        id: "5",
        pass: lr <= 1e-5 && nn <= 1e-5 && within(elapsed, 10.0),
        detail: format!("logistic {lr:.2e}, neural_net {nn:.2e}, {elapsed:.2?}"),
    }
}

fn default_config(seed: u64) -> ExperimentConfig {
    ExperimentConfig { seed, data_path: DATA.into(), ..Default::default() }
}

fn acc(r: &Report, model: &str, fs: SelectionMethod) -> f64 {
    r.row(model, fs).and_then(|row| row.accuracy).unwrap_or(f64::NAN)
}

/// Checks the four bands, returning (all passed, per-part notes).
fn bands(r: &Report) -> (bool, Vec<String>) {
    let methods = [SelectionMethod::Anova, SelectionMethod::Chi2, SelectionMethod::Mi];
    let mut notes = Vec::new();
    let mut ok = true;
    let mut part = |tag: &str, pass: bool, what: String| {
        ok &= pass;
        notes.push(format!("{tag} {} [{what}]", if pass { "ok" } else { "FAIL" }));
    };
    let lr: Vec<f64> = methods.iter().map(|&m| acc(r, "logistic", m)).collect();
    part("6a", lr.iter().all(|a| (75.0..=88.0).contains(a)), format!("logistic {:.2}/{:.2}/{:.2}", lr[0], lr[1], lr[2]));
    let knn: Vec<f64> = methods.iter().map(|&m| acc(r, "knn", m)).collect();
    let gaps: Vec<f64> = lr.iter().zip(&knn).map(|(l, k)| l - k).collect();
    part("6b", gaps.iter().all(|g| *g >= 10.0), format!("logistic minus knn {:.2}/{:.2}/{:.2}", gaps[0], gaps[1], gaps[2]));
    let svm: Vec<f64> = methods.iter().map(|&m| acc(r, "svm_linear", m)).collect();
    let lda: Vec<f64> = methods.iter().map(|&m| acc(r, "lda", m)).collect();
    part(
        "6c",
        svm.iter().zip(&lda).all(|(s, l)| s < l),
        format!("svm {:.2}/{:.2}/{:.2} vs lda {:.2}/{:.2}/{:.2}", svm[0], svm[1], svm[2], lda[0], lda[1], lda[2]),
    );
    let recall = r.row("neural_net", SelectionMethod::Mi).and_then(|row| row.recall).unwrap_or(f64::NAN);
    part("6d", recall >= 0.80, format!("neural_net recall under MI {recall:.4}"));
    (ok, notes)
}

fn end_to_end(seed_42: &Report, elapsed: Duration) -> Outcome {
    let (ok, notes) = bands(seed_42);
    Outcome {
        id: "6",
        pass: ok && within(elapsed, 120.0) && seed_42.rows_used == 297,
        detail: format!("{}; {elapsed:.2?}", notes.join("; ")),
    }
}

fn probit(p: f64) -> f64 {
    let (mut lo, mut hi) = (-40.0, 40.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if std_normal_cdf(mid).unwrap().get() < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn selection_postconditions() -> Outcome {
    let start = Instant::now();
    let ds = cleveland();
    let opts = SelectionOptions::default();
    let mut notes = Vec::new();
    let mut ok = true;
    for method in [SelectionMethod::Anova, SelectionMethod::Chi2] {
        let r = select(&ds, method, &opts).unwrap();
        let good = r.per_feature.iter().filter(|f| f.status == FeatureStatus::Selected).all(|f| f.p_value.unwrap() <= 0.05);
        ok &= good;
        notes.push(format!("{method} selected {:?} all p <= 0.05: {good}", r.selected));
    }

    let target: Vec<f64> = ds.target().iter().map(|&t| t as f64).collect();
    let copy = ds.with_feature(FeatureSchema::new("COPY", "copy", FeatureKind::Binary, &[0, 1]), &target).unwrap();
    let mi = select(&copy, SelectionMethod::Mi, &opts).unwrap();
    let chi = select(&copy, SelectionMethod::Chi2, &opts).unwrap();
    let mi_first = mi.ranking()[0] == "COPY";
    let chi_sel = chi.record("COPY").unwrap().status == FeatureStatus::Selected;

    // numerical copy: the target plus per-class normal scores of width 0.01
    let counts = ds.class_counts();
    let mut seen = [0usize; 2];
    let jittered: Vec<f64> = ds
        .target()
        .iter()
        .map(|&t| {
            let c = t as usize;
            let j = seen[c];
            seen[c] += 1;
            t as f64 + 0.01 * probit((j as f64 + 0.5) / counts[c] as f64)
        })
        .collect();
    let copyn = ds.with_feature(FeatureSchema::numerical("COPYN", "copyn"), &jittered).unwrap();
    let anova = select(&copyn, SelectionMethod::Anova, &opts).unwrap();
    let rec = anova.record("COPYN").unwrap();
    let anova_sel = rec.status == FeatureStatus::Selected;
    ok &= mi_first && chi_sel && anova_sel;
    notes.push(format!("target copy: first under MI {mi_first}, chi2 selected {chi_sel}, ANOVA selected {anova_sel} ({:?})", rec.note));
    let elapsed = start.elapsed();
    Outcome { id: "7", pass: ok && within(elapsed, 5.0), detail: format!("{}; {elapsed:.2?}", notes.join("; ")) }
}

fn determinism(a: &Report, b: &Report, other_seed: &Report, ds: &Dataset) -> Outcome {
    let same = [Format::Markdown, Format::Csv, Format::Json].iter().all(|&f| emit_report(a, f) == emit_report(b, f));
    let folds_42 = splits(ds, Protocol::Kfold { k: 10 }, 42).unwrap();
    let folds_43 = splits(ds, Protocol::Kfold { k: 10 }, 43).unwrap();
    let moved = folds_42 != folds_43;
    let (bands_ok, notes) = bands(other_seed);
    Outcome {
        id: "8",
        pass: same && moved && bands_ok,
        detail: format!("identical bytes {same}, seed 43 moves folds {moved}, seed 43 bands: {}", notes.join("; ")),
    }
}

fn leakage_sentinel(ds: &Dataset) -> Outcome {
    let folds = splits(ds, Protocol::Kfold { k: 10 }, 42).unwrap();
    let opts = SelectionOptions::default();
    let mut hits = Vec::new();
    let mut checks = 0;
    for (f, split) in folds.iter().enumerate() {
        let mut indicator = vec![0.0; ds.rows()];
        split.test.iter().for_each(|&i| indicator[i] = 1.0);
        let binary = ds.with_feature(FeatureSchema::new("SENT", "sent", FeatureKind::Binary, &[0, 1]), &indicator).unwrap();
        let numeric = ds.with_feature(FeatureSchema::new("SENT", "sent", FeatureKind::NumericalDiscrete, &[]), &indicator).unwrap();
        for (method, data) in [(SelectionMethod::Anova, &numeric), (SelectionMethod::Chi2, &binary), (SelectionMethod::Mi, &binary)] {
            let r = select_in_fold(data, split, method, &opts).unwrap();
            checks += 1;
            if r.record("SENT").unwrap().status == FeatureStatus::Selected {
                hits.push(format!("{method} fold {f}"));
            }
        }
    }
    Outcome {
        id: "9",
        pass: hits.is_empty(),
        detail: format!("{checks} (method, fold) selections, sentinel selected in {:?}", hits),
    }
}

#[test]
fn acceptance() {
    let mut outcomes = vec![special_functions(), chi_square_oracle(), mi_oracle(), anova_invariants(), gradient_checks()];

    let ds = cleveland();
    let start = Instant::now();
    let first = run_on_dataset(&default_config(42), &ds).unwrap();
    let elapsed = start.elapsed();
    outcomes.push(end_to_end(&first, elapsed));
    outcomes.push(selection_postconditions());
    let second = run_on_dataset(&default_config(42), &ds).unwrap();
    let other = run_on_dataset(&default_config(43), &ds).unwrap();
    outcomes.push(determinism(&first, &second, &other, &ds));
    outcomes.push(leakage_sentinel(&ds));

    for o in &outcomes {
        println!("criterion {}: {} ({})", o.id, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    assert!(failed.is_empty(), "criteria failing: {failed:?}");
}
