use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{eve_accuracy, eve_mutual_information, qber, Proportion, Rate};
use crate::error::{Error, Result};
use crate::protocol::{repetition_check, SessionTranscript};

/// Column order of `summary.csv`.
pub const CSV_COLUMNS: &[&str] = &[
    "strategy",
    "n",
    "sessions",
    "transcripts",
    "aborted",
    "qber",
    "qber_ci_low",
    "qber_ci_high",
    "eve_accuracy",
    "eve_accuracy_ci_low",
    "eve_accuracy_ci_high",
    "mutual_information_bits",
    "mismatch_rate",
    "mismatch_ci_low",
    "mismatch_ci_high",
    "distinguishability_by_pass",
    "master_seed",
    "config_hash",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub strategy: String,
    pub n: usize,
    /// Logical bits sent.
    pub sessions: u64,
    /// Protocol runs, `sessions × repetition_factor`.
    pub transcripts: u64,
    pub aborted: u64,
    pub qber: Rate,
    pub eve_accuracy: Rate,
    pub mutual_information_bits: f64,
    pub mismatch: Rate,
    pub distinguishability_by_pass: Vec<f64>,
    pub master_seed: u64,
    pub config_hash: String,
}

impl ExperimentSummary {
    pub fn csv_record(&self) -> Vec<String> {
        let f = |x: f64| format!("{x:.6}");
        vec![
            self.strategy.clone(),
            self.n.to_string(),
            self.sessions.to_string(),
            self.transcripts.to_string(),
            self.aborted.to_string(),
            f(self.qber.value),
            f(self.qber.ci_low),
            f(self.qber.ci_high),
            f(self.eve_accuracy.value),
            f(self.eve_accuracy.ci_low),
            f(self.eve_accuracy.ci_high),
            f(self.mutual_information_bits),
            f(self.mismatch.value),
            f(self.mismatch.ci_low),
            f(self.mismatch.ci_high),
            self.distinguishability_by_pass.iter().map(|&d| f(d)).collect::<Vec<_>>().join(";"),
            self.master_seed.to_string(),
            self.config_hash.clone(),
        ]
    }

    /// Writes a header row followed by one row per summary.
    pub fn write_csv<W: Write>(summaries: &[ExperimentSummary], out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_COLUMNS)?;
        for s in summaries {
            w.write_record(s.csv_record())?;
        }
        w.flush().map_err(Error::from)
    }
}

/// Aggregates transcripts into a summary. `sessions` is the number of
/// logical bits; transcripts sharing a `bit_index` are repeated sends.
pub fn summarize(
    strategy: &str,
    n: usize,
    repetition_factor: usize,
    transcripts: &[SessionTranscript],
    distinguishability_by_pass: Vec<f64>,
    master_seed: u64,
    config_hash: &str,
) -> Result<ExperimentSummary> {
    let tally = repetition_check(transcripts, repetition_factor)?;
    let mut bit_indices: Vec<u64> = transcripts.iter().map(|t| t.bit_index).collect();
    bit_indices.sort_unstable();
    bit_indices.dedup();
    Ok(ExperimentSummary {
        strategy: strategy.to_string(),
        n,
        sessions: bit_indices.len() as u64,
        transcripts: transcripts.len() as u64,
        aborted: transcripts.iter().filter(|t| t.aborted).count() as u64,
        qber: qber(transcripts)?,
        eve_accuracy: eve_accuracy(transcripts)?,
        mutual_information_bits: eve_mutual_information(transcripts)?,
        mismatch: Proportion::new(tally.mismatched, tally.groups)?.summarize(),
        distinguishability_by_pass,
        master_seed,
        config_hash: config_hash.to_string(),
    })
}
