use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spde_lab::cli::{
    cmd_check_contractivity, cmd_check_order, cmd_report, cmd_run_convergence, ExperimentConfig,
};
use spde_lab::Error;

#[derive(Parser)]
#[command(name = "spde-lab", version, about = "Strong convergence experiments for stochastic Schrödinger and wave equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo error study; writes CSV and a markdown table.
    RunConvergence(Overrides),
    /// Checks |r(kA)| ≤ 1 per scheme and step size.
    CheckContractivity(Overrides),
    /// Deterministic order of every scheme on the configured data.
    CheckOrder(Overrides),
    /// Aggregates the CSV files of a results directory.
    Report {
        /// Results directory.
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Overrides {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Overrides {
    fn load(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = ExperimentConfig::load(&self.config)?;
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(n) = self.samples {
            cfg.samples = n;
        }
        if self.threads.is_some() {
            cfg.threads = self.threads;
        }
        if let Some(o) = &self.out {
            cfg.out = o.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn verdict(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::RunConvergence(o) => {
            let run = cmd_run_convergence(&o.load()?)?;
            print!("{}", std::fs::read_to_string(&run.summary_path)?);
            println!("wrote {}", run.csv_path.display());
            Ok(verdict(run.pass()))
        }
        Command::CheckContractivity(o) => {
            let run = cmd_check_contractivity(&o.load()?)?;
            print!("{}", run.to_markdown());
            for f in run.failures() {
                eprintln!("{} is not contractive at k = {}: |r| = {} at mode {}", f.scheme, f.k, f.max_modulus, f.worst_mode);
            }
            Ok(verdict(run.pass()))
        }
        Command::CheckOrder(o) => {
            let run = cmd_check_order(&o.load()?)?;
            print!("{}", run.to_markdown());
            Ok(verdict(run.pass()))
        }
        Command::Report { out } => {
            let run = cmd_report(&out)?;
            for w in &run.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", run.markdown);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
