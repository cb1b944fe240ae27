//! Config-driven sweeps over rule families, rate fitting and report output.

pub mod config;
pub mod fit;
pub mod plot;
pub mod runner;

pub use config::{ExperimentConfig, Metric, RuleFamily, OUTPUT_DIR_ENV};
pub use fit::{fit_rate, BMode, RateFit};
pub use plot::{loglog_svg, Series};
pub use runner::{compute_rows, fit_rows, read_csv, run_experiment, write_csv, CsvRow, ExperimentOutput};
