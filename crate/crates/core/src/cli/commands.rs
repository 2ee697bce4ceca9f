use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::config::ExperimentConfig;
use super::output::{csv_string, markdown_table, plot_data, read_csv, schemes_of, CsvRow};
use crate::analysis::{theoretical_rate, ProblemClass, TheoreticalRate};
use crate::error::{Error, Result};
use crate::integrator::{ConvergenceStudy, StudyOutcome};
use crate::schemes::{
    check_contractive, empirical_order, ContractivityReport, OrderEstimate, OrderStudy, SchemeKind,
};

/// Tolerance of `check-order` against the tabulated rate.
pub const ORDER_TOLERANCE: f64 = 0.1;

/// Runs the Monte-Carlo study described by `cfg` without writing files.
pub fn run_study(cfg: &ExperimentConfig) -> Result<StudyOutcome> {
    cfg.validate()?;
    let (model, u0) = cfg.model.build()?;
    ConvergenceStudy {
        model: model.as_ref(),
        schemes: cfg.schemes.clone(),
        u0,
        t_final: cfg.t_final,
        ks: cfg.ks.clone(),
        n_fine: cfg.n_fine(),
        samples: cfg.samples,
        seed: cfg.seed,
        p: cfg.p,
        sigma: cfg.model.sigma,
        full_interval: cfg.full_interval,
        threads: cfg.threads,
        timing: cfg.timing,
    }
    .run()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateCheck {
    pub scheme: String,
    pub expected: f64,
    pub tolerance: f64,
    pub measured: Option<f64>,
}

impl RateCheck {
    pub fn pass(&self) -> bool {
        self.measured
            .is_some_and(|m| (m - self.expected).abs() <= self.tolerance)
    }
}

#[derive(Clone, Debug)]
pub struct ConvergenceRun {
    pub outcome: StudyOutcome,
    pub rows: Vec<CsvRow>,
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
    pub checks: Vec<RateCheck>,
}

impl ConvergenceRun {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(RateCheck::pass)
    }
}

/// Runs the study and writes `<out>/<name>.csv` and `<out>/<name>.md`.
pub fn cmd_run_convergence(cfg: &ExperimentConfig) -> Result<ConvergenceRun> {
    let outcome = run_study(cfg)?;
    let rows: Vec<CsvRow> = outcome
        .reports
        .iter()
        .map(|r| CsvRow::from_report(r, cfg.seed))
        .collect();
    let checks = cfg
        .expect
        .iter()
        .map(|e| RateCheck {
            scheme: e.scheme.clone(),
            expected: e.rate,
            tolerance: e.tolerance,
            measured: outcome.fit(&e.scheme).map(|f| f.slope),
        })
        .collect::<Vec<_>>();

    let mut md = markdown_table(&cfg.name, &rows);
    let _ = writeln!(
        md,
        "\nsamples: {}, seed: {}, p: {}, threads: {}, noise amplitudes: {}, coupling: {}",
        cfg.samples, cfg.seed, cfg.p, outcome.threads, outcome.noise_amplitudes, outcome.coupling
    );
    for c in &checks {
        let _ = writeln!(
            md,
            "\n{} {}: expected {} ± {}, measured {}",
            if c.pass() { "PASS" } else { "FAIL" },
            c.scheme,
            c.expected,
            c.tolerance,
            c.measured.map_or("n/a".into(), |m| format!("{m:.4}"))
        );
    }

    std::fs::create_dir_all(&cfg.out)?;
    let csv_path = cfg.out.join(format!("{}.csv", cfg.name));
    let summary_path = cfg.out.join(format!("{}.md", cfg.name));
    std::fs::write(&csv_path, csv_string(&rows)?)?;
    std::fs::write(&summary_path, md)?;
    Ok(ConvergenceRun {
        outcome,
        rows,
        csv_path,
        summary_path,
        checks,
    })
}

#[derive(Clone, Debug)]
pub struct ContractivityRun {
    pub reports: Vec<ContractivityReport>,
}

impl ContractivityRun {
    pub fn pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ContractivityReport> {
        self.reports.iter().filter(|r| !r.pass)
    }

    pub fn to_markdown(&self) -> String {
        let mut md = String::from("| scheme | k | max |r| | worst mode | result |\n|---|---|---|---|---|\n");
        for r in &self.reports {
            let _ = writeln!(
                md,
                "| {} | {} | {:.6} | {} | {} |",
                r.scheme,
                r.k,
                r.max_modulus,
                r.worst_mode,
                if r.pass { "pass" } else { "FAIL" }
            );
        }
        md
    }
}

/// Checks `max |r(kA)| ≤ 1` for every scheme and every configured `k` (and `k_ref`).
pub fn cmd_check_contractivity(cfg: &ExperimentConfig) -> Result<ContractivityRun> {
    cfg.validate()?;
    let lattice = cfg.model.lattice()?;
    let mut ks = cfg.ks.clone();
    if !ks.contains(&cfg.k_ref) {
        ks.push(cfg.k_ref);
    }
    let reports = cfg
        .schemes
        .iter()
        .flat_map(|s| ks.iter().map(|&k| check_contractive(s, &lattice, k)))
        .collect();
    Ok(ContractivityRun { reports })
}

#[derive(Clone, Debug)]
pub struct OrderRow {
    pub scheme: String,
    pub study: OrderStudy,
    /// `None` for custom rationals, which have no tabulated rate.
    pub expected: Option<TheoreticalRate>,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct OrderRun {
    /// Critical smoothness of the initial data.
    pub smoothness: f64,
    pub rows: Vec<OrderRow>,
}

impl OrderRun {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_markdown(&self) -> String {
        let mut md = format!(
            "data smoothness β = {}\n\n| scheme | measured | expected | result |\n|---|---|---|---|\n",
            self.smoothness
        );
        for r in &self.rows {
            let measured = match &r.study.estimate {
                OrderEstimate::Exact { max_error } => format!("exact ({max_error:.2e})"),
                OrderEstimate::Fitted(f) => format!("{:.4}", f.slope),
            };
            let expected = r.expected.map_or("n/a".into(), |t| {
                if t.alpha.is_infinite() {
                    "exact".into()
                } else {
                    format!("{:.4}", t.alpha)
                }
            });
            let _ = writeln!(
                md,
                "| {} | {measured} | {expected} | {} |",
                r.scheme,
                if r.pass { "pass" } else { "FAIL" }
            );
        }
        md
    }
}

/// Deterministic order study of every scheme on the configured `u0`, compared
/// with the tabulated rate for data of the same smoothness.
pub fn cmd_check_order(cfg: &ExperimentConfig) -> Result<OrderRun> {
    cfg.validate()?;
    let (_, u0) = cfg.model.build()?;
    let smoothness = cfg.model.u0.smoothness(cfg.model.generator());
    let mut rows = Vec::with_capacity(cfg.schemes.len());
    for scheme in &cfg.schemes {
        let study = empirical_order(scheme, &u0, cfg.t_final, &cfg.ks)?;
        let expected = match scheme.kind() {
            SchemeKind::CustomRational => None,
            kind => Some(theoretical_rate(kind, smoothness, ProblemClass::Deterministic)?),
        };
        let pass = match (&study.estimate, expected) {
            (OrderEstimate::Exact { .. }, Some(t)) => t.alpha.is_infinite(),
            (OrderEstimate::Fitted(f), Some(t)) => (f.slope - t.alpha).abs() <= ORDER_TOLERANCE,
            (_, None) => true,
        };
        rows.push(OrderRow {
            scheme: scheme.label().to_string(),
            study,
            expected,
            pass,
        });
    }
    Ok(OrderRun { smoothness, rows })
}

#[derive(Clone, Debug, Default)]
pub struct ReportRun {
    pub markdown: String,
    pub report_path: Option<PathBuf>,
    pub plot_files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// Aggregates every `*.csv` in `dir` into `report.md` and one
/// `<stem>_<scheme>.dat` plot file per series.
pub fn cmd_report(dir: &Path) -> Result<ReportRun> {
    if !dir.is_dir() {
        return Err(Error::CorruptResult {
            path: dir.display().to_string(),
            reason: "results directory does not exist".into(),
        });
    }
    let mut csvs: Vec<PathBuf> = std::fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    csvs.retain(|p| p.extension().is_some_and(|e| e == "csv"));
    csvs.sort();

    let mut run = ReportRun::default();
    let mut md = String::from("# Convergence report\n");
    if csvs.is_empty() {
        run.warnings.push(format!("no result files in {}", dir.display()));
        md.push_str("\nNo result files found.\n");
    }
    for path in &csvs {
        let rows = read_csv(path)?;
        let stem = path.file_stem().unwrap_or_default().to_string_lossy().to_string();
        if rows.is_empty() {
            run.warnings.push(format!("{} has no rows", path.display()));
        }
        let _ = write!(md, "\n{}", markdown_table(&stem, &rows));
        for scheme in schemes_of(&rows) {
            let plot = dir.join(format!("{stem}_{scheme}.dat"));
            std::fs::write(&plot, plot_data(&rows, &scheme))?;
            run.plot_files.push(plot);
        }
    }
    let report_path = dir.join("report.md");
    std::fs::write(&report_path, &md)?;
    run.markdown = md;
    run.report_path = Some(report_path);
    Ok(run)
}

