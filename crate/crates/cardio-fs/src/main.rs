use std::path::PathBuf;
use std::process::ExitCode;

use cardio_fs::config::{parse_models, ConfigError, ExperimentConfig, Format, Protocol, SelectionScope};
use cardio_fs::{emit_confusion, emit_report, load_cleveland, run_experiment};
use cardio_fs_core::selection::{select, PAdjust};
use cardio_fs_core::{Probability, SelectionMethod, SelectionOptions};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cardio-fs", version, about = "Feature-selection benchmark on the Cleveland heart-disease data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the selection x model grid and write a report.
    Run(RunArgs),
    /// Run one selection method on the whole file and print the result as JSON.
    Select {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_parser = parse_method)]
        fs: SelectionMethod,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 10)]
        mi_m: usize,
        #[arg(long, default_value_t = 10)]
        mi_bins: usize,
        #[arg(long)]
        bonferroni: bool,
    },
    /// Check a data file against the schema.
    Validate {
        #[arg(long)]
        data: PathBuf,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    data: Option<PathBuf>,
    /// Selection method; repeat for several.
    #[arg(long, value_parser = parse_method)]
    fs: Vec<SelectionMethod>,
    /// Comma-separated model names.
    #[arg(long)]
    models: Option<String>,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    mi_m: Option<usize>,
    /// Standardise features on each training fold.
    #[arg(long)]
    scale: bool,
    /// Select features once on the full dataset instead of per fold.
    #[arg(long)]
    fs_on_full: bool,
    /// md, csv or json.
    #[arg(long, value_parser = parse_format)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the pooled confusion matrices here.
    #[arg(long)]
    confusion_out: Option<PathBuf>,
}

fn parse_method(s: &str) -> Result<SelectionMethod, String> {
    SelectionMethod::parse(s).ok_or_else(|| format!("unknown method {s:?}; expected anova, chi2, mi or none"))
}

fn parse_format(s: &str) -> Result<Format, String> {
    Format::parse(s).ok_or_else(|| format!("unknown format {s:?}; expected md, csv or json"))
}

fn build_config(a: &RunArgs) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = match &a.config {
        Some(p) => ExperimentConfig::from_file(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(d) = &a.data {
        cfg.data_path = d.clone();
    }
    if !a.fs.is_empty() {
        cfg.fs_methods = a.fs.clone();
    }
    if let Some(m) = &a.models {
        cfg.models = parse_models(m).ok_or_else(|| ConfigError::Invalid(format!("bad model list {m:?}")))?;
    }
    if let Some(k) = a.folds {
        cfg.protocol = Protocol::Kfold { k };
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(x) = a.alpha {
        cfg.alpha = x;
    }
    if let Some(m) = a.mi_m {
        cfg.mi_m = m;
    }
    if a.scale {
        cfg.scaling = true;
    }
    if a.fs_on_full {
        cfg.selection_scope = SelectionScope::FullDataset;
    }
    if let Some(f) = a.format {
        cfg.format = f;
    }
    if let Some(o) = &a.out {
        cfg.output = Some(o.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_out(path: Option<&PathBuf>, bytes: &[u8]) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes).map_err(|e| e.to_string())
        }
    }
}

fn run(a: RunArgs) -> ExitCode {
    let cfg = match build_config(&a) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let report = match run_experiment(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let mut status = 0;
    if let Err(e) = write_out(cfg.output.as_ref(), &emit_report(&report, cfg.format)) {
        eprintln!("error: {e}");
        status = 2;
    }
    if let Some(p) = &a.confusion_out {
        if let Err(e) = write_out(Some(p), &emit_confusion(&report)) {
            eprintln!("error: {e}");
            status = 2;
        }
    }
    for r in report.rows.iter().filter(|r| r.error.is_some()) {
        eprintln!("failed: {}", r.error.as_deref().unwrap_or_default());
        status = 2;
    }
    ExitCode::from(status)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run(a) => run(a),
        Command::Select { data, fs, alpha, mi_m, mi_bins, bonferroni } => {
            let Some(alpha) = Probability::new(alpha) else {
                eprintln!("error: alpha {alpha} is outside [0, 1]");
                return ExitCode::from(1);
            };
            let ds = match load_cleveland(&data) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            let adjust = if bonferroni { PAdjust::Bonferroni } else { PAdjust::Identity };
            let opts = SelectionOptions { alpha, adjust, mi_m, mi_bins, pass_through: true };
            match select(&ds, fs, &opts) {
                Ok(r) => {
                    println!("{}", serde_json::to_string_pretty(&r).expect("selection serialises"));
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Command::Validate { data } => match load_cleveland(&data) {
            Ok(ds) => {
                let [neg, pos] = ds.class_counts();
                println!(
                    "ok: {} rows ({} dropped for missing values), {} features, {} negative / {} positive",
                    ds.rows(),
                    ds.dropped_rows(),
                    ds.n_features(),
                    neg,
                    pos
                );
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("invalid: {e}");
                ExitCode::from(1)
            }
        },
    }
}
