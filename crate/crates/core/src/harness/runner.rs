use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;

use super::config::{ExperimentConfig, KeyPolicy};
use super::seed::{stream_rng, Stream};
use crate::analysis::{ensemble_distinguishability, summarize, ExperimentSummary};
use crate::error::{Error, Result};
use crate::protocol::{run_session, run_session_with_keys, PadlockKey, Party, SessionTranscript};

pub const TRANSCRIPTS_FILE: &str = "transcripts.jsonl";
pub const SUMMARY_CSV: &str = "summary.csv";
pub const SUMMARY_JSON: &str = "summary.json";

/// Transcripts and summary of one experiment.
#[derive(Debug, Clone)]
pub struct ExperimentRun {
    pub transcripts: Vec<SessionTranscript>,
    pub summary: ExperimentSummary,
}

/// Logical bit `bit_index` of an experiment.
pub fn logical_bit(master_seed: u64, bit_index: u64) -> u8 {
    stream_rng(master_seed, Stream::Bit, bit_index).random_range(0..2u8)
}

fn run_one(config: &ExperimentConfig, master_seed: u64, session_index: u64) -> Result<SessionTranscript> {
    let session = config.session_config();
    let r = config.repetition_factor as u64;
    let bit_index = session_index / r;
    let bit = logical_bit(master_seed, bit_index);
    let mut adversary = config.strategy.build()?;
    let mut rng = stream_rng(master_seed, Stream::Session, session_index);
    let mut t = match config.key_policy {
        KeyPolicy::Fresh => run_session(&session, bit, adversary.as_mut(), session_index, &mut rng)?,
        KeyPolicy::ReuseAcrossRepetitions => {
            let mut key_rng = stream_rng(master_seed, Stream::Key, bit_index);
            let dist = &session.angle_distribution;
            let a = PadlockKey::generate(Party::Alice, config.n, dist, &mut key_rng)?;
            let b = PadlockKey::generate(Party::Bob, config.n, dist, &mut key_rng)?;
            run_session_with_keys(&session, bit, a, b, adversary.as_mut(), session_index, &mut rng)?
        }
    };
    t.master_seed = master_seed;
    t.session_index = session_index;
    t.bit_index = bit_index;
    Ok(t)
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {workers} workers: {e}")))
}

/// Runs every session of the experiment and aggregates the results.
///
/// Each session draws from its own seed derived from `(master_seed, index)`
/// and results are gathered in index order, so the output does not depend
/// on `workers`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentRun> {
    config.validate()?;
    let seed = config.seed()?;
    let total = config
        .sessions
        .checked_mul(config.repetition_factor as u64)
        .ok_or_else(|| Error::Config("sessions × repetition_factor overflows".into()))?;
    let pool = pool(config.workers)?;
    let session = config.session_config();
    let samples = config.ensemble_samples();
    let (transcripts, distinguishability) = pool.install(|| {
        let transcripts: Result<Vec<_>> = (0..total).into_par_iter().map(|i| run_one(config, seed, i)).collect();
        let distinguishability: Result<Vec<f64>> = if samples == 0 {
            Ok(Vec::new())
        } else {
            (1..=session.pass_count())
                .into_par_iter()
                .map(|pass| {
                    let mut rng = stream_rng(seed, Stream::Ensemble, pass as u64);
                    ensemble_distinguishability(pass, &session, samples, &mut rng)
                })
                .collect()
        };
        (transcripts, distinguishability)
    });
    let transcripts = transcripts?;
    let summary = summarize(
        &config.strategy.label(),
        config.n,
        config.repetition_factor,
        &transcripts,
        distinguishability?,
        seed,
        &config.config_hash(),
    )?;
    Ok(ExperimentRun { transcripts, summary })
}

impl ExperimentRun {
    /// Writes `transcripts.jsonl`, `summary.csv` and `summary.json` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        write_transcripts(&self.transcripts, &dir.join(TRANSCRIPTS_FILE))?;
        write_summaries(std::slice::from_ref(&self.summary), dir)
    }
}

pub fn write_transcripts(transcripts: &[SessionTranscript], path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for t in transcripts {
        serde_json::to_writer(&mut w, t)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_transcripts(path: &Path) -> Result<Vec<SessionTranscript>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let t = serde_json::from_str(&line)
            .map_err(|e| Error::InvalidArgument(format!("{}:{}: {e}", path.display(), i + 1)))?;
        out.push(t);
    }
    Ok(out)
}

/// Writes `summary.csv` and `summary.json` for one or more summaries.
pub fn write_summaries(summaries: &[ExperimentSummary], dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    ExperimentSummary::write_csv(summaries, File::create(dir.join(SUMMARY_CSV))?)?;
    let mut w = BufWriter::new(File::create(dir.join(SUMMARY_JSON))?);
    if let [one] = summaries {
        serde_json::to_writer_pretty(&mut w, one)?;
    } else {
        serde_json::to_writer_pretty(&mut w, summaries)?;
    }
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// Re-summarizes a transcript file. The repetition factor is taken as the
/// largest number of copies of any logical bit; distinguishability is not
/// recomputed.
pub fn report(path: &Path) -> Result<ExperimentSummary> {
    let transcripts = read_transcripts(path)?;
    let first =
        transcripts.first().ok_or_else(|| Error::InvalidArgument(format!("{} has no transcripts", path.display())))?;
    let mut copies = std::collections::BTreeMap::new();
    for t in &transcripts {
        *copies.entry(t.bit_index).or_insert(0usize) += 1;
    }
    let r = copies.values().copied().max().unwrap_or(1);
    summarize(&first.eve.strategy, first.n, r, &transcripts, Vec::new(), first.master_seed, "")
}
