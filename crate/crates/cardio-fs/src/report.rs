//! Rendering a [`Report`] as markdown, CSV or JSON.

use std::fmt::Write as _;

use cardio_fs_core::ConfusionMatrix;

use crate::config::Format;
use crate::harness::{Report, ReportRow, RowStatus};

pub const CSV_HEADER: [&str; 14] = [
    "model", "fs_method", "status", "precision", "recall", "specificity", "roc_auc", "f1",
    "accuracy", "accuracy_std", "tp", "fp", "tn", "fn",
];

fn metric(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |v| format!("{v:.4}"))
}

fn pct(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |v| format!("{v:.2}"))
}

pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Markdown => markdown(report).into_bytes(),
        Format::Csv => csv_bytes(report),
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("report serialises");
            out.push(b'\n');
            out
        }
    }
}

fn markdown(report: &Report) -> String {
    let mut s = String::new();
    let c = &report.config;
    let _ = writeln!(s, "# Feature selection benchmark\n");
    let _ = writeln!(
        s,
        "{} | rows used: {} | rows dropped: {} | protocol: {} | seed: {} | scope: {} | scaling: {}\n",
        report.version,
        report.rows_used,
        report.dropped_rows,
        match c.protocol {
            crate::config::Protocol::Kfold { k } => format!("{k}-fold CV"),
            crate::config::Protocol::Holdout { fraction } => format!("holdout {fraction}"),
        },
        c.seed,
        match c.selection_scope {
            crate::config::SelectionScope::PerFold => "per fold",
            crate::config::SelectionScope::FullDataset => "full dataset",
        },
        if c.scaling { "on" } else { "off" },
    );
    for detail in &report.selection {
        let m = detail.method;
        let _ = writeln!(s, "## {}\n", m.label());
        if let Some(full) = &detail.full_dataset {
            let _ = writeln!(s, "Kept on the full dataset: {}\n", full.kept().join(", "));
        }
        if let Some(e) = &detail.error {
            let _ = writeln!(s, "Selection error: {e}\n");
        }
        s.push_str("| Model | Precision | Recall | ROC_AUC | F1 | Accuracy |\n");
        s.push_str("|---|---|---|---|---|---|\n");
        for r in report.rows.iter().filter(|r| r.fs_method == m) {
            if r.status == RowStatus::Failed {
                let _ = writeln!(s, "| {} | failed | failed | failed | failed | failed |", r.model_label);
                continue;
            }
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} | {} |",
                r.model_label,
                metric(r.precision),
                metric(r.recall),
                metric(r.roc_auc),
                metric(r.f1),
                pct(r.accuracy)
            );
        }
        s.push('\n');
    }

    let methods: Vec<_> = report.selection.iter().map(|d| d.method).collect();
    s.push_str("## Accuracy by selection method\n\n| Model |");
    for m in &methods {
        let _ = write!(s, " {} |", m.label());
    }
    s.push_str("\n|---|");
    s.push_str(&"---|".repeat(methods.len()));
    s.push('\n');
    for spec in &c.models {
        let _ = write!(s, "| {} |", spec.kind.display_name());
        for &m in &methods {
            let cell = report.row(spec.kind.name(), m).map_or("n/a".into(), |r| match r.status {
                RowStatus::Ok => pct(r.accuracy),
                RowStatus::Failed => "failed".into(),
            });
            let _ = write!(s, " {cell} |");
        }
        s.push('\n');
    }

    let failures: Vec<&ReportRow> = report.rows.iter().filter(|r| r.status == RowStatus::Failed).collect();
    if !failures.is_empty() {
        s.push_str("\n## Failed cells\n\n");
        for r in failures {
            let _ = writeln!(s, "- {}: {}", r.model, r.error.as_deref().unwrap_or("unknown error"));
        }
    }
    let flagged: Vec<&ReportRow> = report.rows.iter().filter(|r| !r.undefined_metrics.is_empty()).collect();
    if !flagged.is_empty() {
        s.push_str("\n## Undefined metrics reported as 0\n\n");
        for r in flagged {
            let _ = writeln!(s, "- {} / {}: {}", r.model, r.fs_method, r.undefined_metrics.join(", "));
        }
    }
    s
}

fn csv_bytes(report: &Report) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in &report.rows {
        let opt = |v: Option<f64>, digits: usize| v.map_or(String::new(), |v| format!("{v:.digits$}"));
        let count = |f: fn(&ConfusionMatrix) -> u64| r.confusion.as_ref().map_or(String::new(), |c| f(c).to_string());
        let status = match r.status {
            RowStatus::Ok => "ok",
            RowStatus::Failed => "failed",
        };
        w.write_record([
            r.model.clone(),
            r.fs_method.name().to_string(),
            status.to_string(),
            opt(r.precision, 4),
            opt(r.recall, 4),
            opt(r.specificity, 4),
            opt(r.roc_auc, 4),
            opt(r.f1, 4),
            opt(r.accuracy, 2),
            opt(r.accuracy_std, 2),
            count(|c| c.tp),
            count(|c| c.fp),
            count(|c| c.tn),
            count(|c| c.fn_),
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Pooled counts per cell, laid out as
///
/// ```text
///              pred 0  pred 1
///   actual 0       tn      fp
///   actual 1       fn      tp
/// ```
pub fn emit_confusion(report: &Report) -> Vec<u8> {
    let mut s = String::new();
    for r in &report.rows {
        let _ = writeln!(s, "{} / {}", r.model, r.fs_method);
        match &r.confusion {
            Some(c) => {
                let _ = writeln!(s, "            pred 0  pred 1");
                let _ = writeln!(s, "  actual 0 {:>7} {:>7}", c.tn, c.fp);
                let _ = writeln!(s, "  actual 1 {:>7} {:>7}", c.fn_, c.tp);
            }
            None => {
                let _ = writeln!(s, "  failed");
            }
        }
        s.push('\n');
    }
    s.into_bytes()
}
