//! Configuration, batch orchestration and run-directory persistence for the
//! `qgcolor` command-line tool.
//!
//! A run directory contains one `trial_<seed>/` folder per seed and a
//! `manifest.json` listing every file written.

pub mod config;
pub mod error;
pub mod manifest;
pub mod pipeline;
pub mod plot;
pub mod report;

pub use config::{load_config, parse_config, Overrides, RunConfig, Seeds};
pub use error::{CliError, CliResult};
pub use manifest::{EnsembleSummary, MeanStderr, RunManifest, TrialEntry, MANIFEST_FILE};
pub use pipeline::{
    analyze, load_manifest, prepare_output_dir, run_analyze, run_fbm, run_pipeline, run_simulate, run_trial,
    simulate_trial, TrialOutput,
};
pub use report::emit_report;
