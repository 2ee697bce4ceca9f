//! Runs a JSON experiment file and writes its CSV and markdown summary,
//! the same path the `run-convergence` subcommand takes.
//!
//! cargo run --release --example run_config -- configs/quick.json

use std::path::PathBuf;

use spde_lab::cli::{cmd_run_convergence, ExperimentConfig};

fn main() -> spde_lab::Result<()> {
    let path: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/quick.json"));
    let mut cfg = ExperimentConfig::load(&path)?;
    cfg.out = std::env::temp_dir().join("spde-lab-example");

    let run = cmd_run_convergence(&cfg)?;
    print!("{}", std::fs::read_to_string(&run.summary_path)?);
    println!("csv: {}", run.csv_path.display());
    if !run.checks.is_empty() {
        println!("expectations met: {}", run.pass());
    }
    Ok(())
}
