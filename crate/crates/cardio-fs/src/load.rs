//! Reading the Cleveland CSV, with or without a header row.

use std::path::{Path, PathBuf};

use cardio_fs_core::dataset::UCI_COLUMNS;
use cardio_fs_core::{Dataset, DatasetError};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("no data rows")]
    Empty,
    #[error("line {line}: malformed CSV: {detail}")]
    Csv { line: u64, detail: String },
    #[error("line {line}, column {column}: cannot parse {value:?} as a number")]
    Parse { line: u64, column: &'static str, value: String },
    #[error("line {line}: expected 14 fields, found {found}")]
    FieldCount { line: u64, found: usize },
    #[error("header: {0}")]
    Header(String),
    #[error(transparent)]
    Validation(#[from] DatasetError),
}

/// Loads a Cleveland file. A first row that is not numeric is taken as a
/// header naming the UCI columns in any order and case.
pub fn load_cleveland(path: &Path) -> Result<Dataset, LoadError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| LoadError::Io { path: path.to_path_buf(), source })?;
    load_cleveland_str(&text)
}

pub fn load_cleveland_str(text: &str) -> Result<Dataset, LoadError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut order: [usize; 14] = std::array::from_fn(|i| i);
    let mut rows = Vec::new();
    let mut dropped = 0;
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| LoadError::Csv {
            line: e.position().map_or(0, |p| p.line()),
            detail: e.to_string(),
        })?;
        let line = record.position().map_or(k as u64 + 1, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 14 {
            return Err(LoadError::FieldCount { line, found: record.len() });
        }
        if k == 0 && is_header(&record) {
            order = header_order(&record)?;
            continue;
        }
        if record.iter().any(|f| f == "?") {
            dropped += 1;
            continue;
        }
        let mut raw = [0.0; 14];
        for (u, slot) in raw.iter_mut().enumerate() {
            let field = &record[order[u]];
            *slot = field.parse().map_err(|_| LoadError::Parse {
                line,
                column: UCI_COLUMNS[u],
                value: field.to_string(),
            })?;
        }
        rows.push((line as usize, raw));
    }
    if rows.is_empty() {
        return Err(LoadError::Empty);
    }
    Ok(Dataset::from_cleveland_rows(&rows, dropped)?)
}

fn is_header(record: &csv::StringRecord) -> bool {
    record.iter().any(|f| f != "?" && f.parse::<f64>().is_err())
}

// order[u] = position in the file of UCI column u
fn header_order(record: &csv::StringRecord) -> Result<[usize; 14], LoadError> {
    let mut order = [usize::MAX; 14];
    for (pos, name) in record.iter().enumerate() {
        let u = UCI_COLUMNS
            .iter()
            .position(|c| c.eq_ignore_ascii_case(name))
            .ok_or_else(|| LoadError::Header(format!("unknown column {name:?}")))?;
        if order[u] != usize::MAX {
            return Err(LoadError::Header(format!("column {name:?} repeated")));
        }
        order[u] = pos;
    }
    Ok(order)
}
