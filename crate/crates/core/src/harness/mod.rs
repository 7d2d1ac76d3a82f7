//! Experiment driver: JSON configs, per-session seeding, parallel runs and
//! the output files (`transcripts.jsonl`, `summary.csv`, `summary.json`).

pub mod cli;
mod config;
mod runner;
mod seed;

pub use config::{ExperimentConfig, KeyPolicy, SweepConfig, SweepGrid};
pub use runner::{
    logical_bit, read_transcripts, report, run_experiment, write_summaries, write_transcripts, ExperimentRun,
    SUMMARY_CSV, SUMMARY_JSON, TRANSCRIPTS_FILE,
};
pub use seed::{derive_seed, stream_rng, Stream};

use crate::analysis::ExperimentSummary;
use crate::error::Result;

/// Runs every cell of a sweep, writing each into its own directory plus a
/// combined `summary.csv`/`summary.json` under the base `out_dir`.
pub fn run_sweep(sweep: &SweepConfig) -> Result<Vec<ExperimentSummary>> {
    let mut summaries = Vec::new();
    for cell in sweep.cells()? {
        let run = run_experiment(&cell)?;
        run.write_to(&cell.out_dir)?;
        summaries.push(run.summary);
    }
    write_summaries(&summaries, &sweep.base.out_dir)?;
    Ok(summaries)
}
