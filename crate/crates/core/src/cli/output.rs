use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::{fit_rate, RateFit};
use crate::error::{Error, Result};
use crate::integrator::ErrorReport;

/// Fixed CSV column order.
pub const CSV_COLUMNS: [&str; 9] = [
    "scheme",
    "k",
    "uniform_error",
    "pointwise_error",
    "full_interval_error",
    "p",
    "samples",
    "seed",
    "wall_ms",
];

/// One CSV line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub scheme: String,
    pub k: f64,
    pub uniform_error: f64,
    pub pointwise_error: f64,
    pub full_interval_error: Option<f64>,
    pub p: f64,
    pub samples: usize,
    /// Base seed of the batch.
    pub seed: u64,
    pub wall_ms: f64,
}

impl CsvRow {
    pub fn from_report(r: &ErrorReport, seed: u64) -> Self {
        CsvRow {
            scheme: r.scheme.clone(),
            k: r.k,
            uniform_error: r.uniform_error,
            pointwise_error: r.pointwise_error,
            full_interval_error: r.full_interval_error,
            p: r.p,
            samples: r.sample_count,
            seed,
            wall_ms: r.wall_ms,
        }
    }
}

pub fn csv_string(rows: &[CsvRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(csv_io)?;
    }
    if rows.is_empty() {
        w.write_record(CSV_COLUMNS).map_err(csv_io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let corrupt = |reason: String| Error::CorruptResult {
        path: path.display().to_string(),
        reason,
    };
    let mut rdr = csv::Reader::from_path(path).map_err(|e| corrupt(e.to_string()))?;
    let headers = rdr.headers().map_err(|e| corrupt(e.to_string()))?;
    if headers.iter().ne(CSV_COLUMNS) {
        return Err(corrupt(format!("unexpected header {:?}", headers.iter().collect::<Vec<_>>())));
    }
    rdr.deserialize()
        .map(|row| row.map_err(|e| corrupt(e.to_string())))
        .collect()
}

/// Schemes in first-appearance order.
pub fn schemes_of(rows: &[CsvRow]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for r in rows {
        if !out.contains(&r.scheme) {
            out.push(r.scheme.clone());
        }
    }
    out
}

/// Uniform-error fit per scheme; `None` when fewer than three usable points.
pub fn fits_of(rows: &[CsvRow]) -> Vec<(String, Option<RateFit>)> {
    schemes_of(rows)
        .into_iter()
        .map(|s| {
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.scheme == s)
                .map(|r| (r.k, r.uniform_error))
                .collect();
            let fit = fit_rate(&pts).ok();
            (s, fit)
        })
        .collect()
}

fn fmt_k(k: f64) -> String {
    let e = k.log2();
    if e.fract() == 0.0 {
        format!("2^{}", e as i64)
    } else {
        format!("{k}")
    }
}

/// Rate row followed by the per-`k` uniform errors, one column per scheme.
pub fn markdown_table(title: &str, rows: &[CsvRow]) -> String {
    let schemes = schemes_of(rows);
    let fits = fits_of(rows);
    let mut md = String::new();
    let _ = writeln!(md, "| {title} | {} |", schemes.join(" | "));
    let _ = writeln!(md, "|---|{}", "---|".repeat(schemes.len()));
    let rates: Vec<String> = fits
        .iter()
        .map(|(_, f)| f.as_ref().map_or("n/a".into(), |f| format!("{:.4}", f.slope)))
        .collect();
    let _ = writeln!(md, "| rate | {} |", rates.join(" | "));
    let mut ks: Vec<f64> = Vec::new();
    for r in rows {
        if !ks.contains(&r.k) {
            ks.push(r.k);
        }
    }
    for k in ks {
        let cells: Vec<String> = schemes
            .iter()
            .map(|s| {
                rows.iter()
                    .find(|r| &r.scheme == s && r.k == k)
                    .map_or("".into(), |r| format!("{:.4e}", r.uniform_error))
            })
            .collect();
        let _ = writeln!(md, "| k = {} | {} |", fmt_k(k), cells.join(" | "));
    }
    md
}

/// Whitespace-separated `k error` lines for one scheme.
pub fn plot_data(rows: &[CsvRow], scheme: &str) -> String {
    let mut s = String::from("# k uniform_error\n");
    for r in rows.iter().filter(|r| r.scheme == scheme) {
        let _ = writeln!(s, "{} {}", r.k, r.uniform_error);
    }
    s
}
