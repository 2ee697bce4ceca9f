//! Experiment configuration, the four commands behind the binary, and their
//! CSV, markdown and plot-data output.

mod commands;
mod config;
mod initial;
mod output;

pub use commands::{
    cmd_check_contractivity, cmd_check_order, cmd_report, cmd_run_convergence, run_study,
    ContractivityRun, ConvergenceRun, OrderRow, OrderRun, RateCheck, ReportRun, ORDER_TOLERANCE,
};
pub use config::{ExpectedRate, ExperimentConfig, ModelConfig, ModelKind};
pub use initial::InitialData;
pub use output::{csv_string, fits_of, markdown_table, plot_data, read_csv, CsvRow, CSV_COLUMNS};
