//! Two seeds of the quick configuration aggregated into `report.md` and
//! gnuplot-ready `.dat` files.

use std::path::PathBuf;

use spde_lab::cli::{cmd_report, cmd_run_convergence, ExperimentConfig};

fn main() -> spde_lab::Result<()> {
    let base = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/quick.json");
    let out = std::env::temp_dir().join("spde-lab-report-example");
    for seed in [1, 2] {
        let mut cfg = ExperimentConfig::load(&base)?;
        cfg.name = format!("quick_seed{seed}");
        cfg.seed = seed;
        cfg.out = out.clone();
        cmd_run_convergence(&cfg)?;
    }
    let report = cmd_report(&out)?;
    print!("{}", report.markdown);
    for f in &report.plot_files {
        println!("plot data: {}", f.display());
    }
    Ok(())
}
