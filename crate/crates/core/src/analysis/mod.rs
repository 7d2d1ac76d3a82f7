//! Statistics over completed transcripts: error rates with Wilson
//! intervals, bias-corrected mutual information, ensemble
//! distinguishability of wire states and the cloning fidelity budget.
//!
//! "Eve learns nothing" is checked two ways. The trace distance between the
//! bit-conditional average wire states bounds what any measurement could
//! extract, and the mutual information between the outcomes Eve actually
//! recorded and the key bit measures what the implemented attacks got.

mod ensemble;
mod info;
mod stats;
mod summary;

pub use ensemble::{ensemble_distinguishability, fidelity_budget, MIN_ENSEMBLE_SAMPLES};
pub use info::{entropy_bits, mutual_information, MAX_ALPHABET};
pub use stats::{standard_error, Proportion, Rate, Z95};
pub use summary::{summarize, ExperimentSummary, CSV_COLUMNS};

use crate::error::{Error, Result};
use crate::protocol::SessionTranscript;

/// Bob's error count over non-aborted transcripts.
pub fn qber_counts(transcripts: &[SessionTranscript]) -> Proportion {
    transcripts
        .iter()
        .filter_map(SessionTranscript::is_error)
        .fold(Proportion::default(), |acc, err| acc.merge(Proportion { successes: u64::from(err), trials: 1 }))
}

/// Fraction of non-aborted sessions where Bob decoded the wrong bit.
pub fn qber(transcripts: &[SessionTranscript]) -> Result<Rate> {
    let counts = qber_counts(transcripts);
    if counts.trials == 0 {
        return Err(Error::invalid("qber needs at least one non-aborted transcript"));
    }
    Ok(counts.summarize())
}

/// Fraction of sessions where Eve's final guess equals the key bit.
pub fn eve_accuracy(transcripts: &[SessionTranscript]) -> Result<Rate> {
    let counts = transcripts
        .iter()
        .filter(|t| !t.aborted)
        .filter_map(|t| t.eve.guess.map(|g| g == t.bit))
        .fold(Proportion::default(), |acc, hit| acc.merge(Proportion { successes: u64::from(hit), trials: 1 }));
    if counts.trials == 0 {
        return Err(Error::invalid("eve_accuracy needs at least one transcript with a guess"));
    }
    Ok(counts.summarize())
}

/// Every measurement outcome Eve recorded in a session, in order.
pub fn eve_outcome_tuple(t: &SessionTranscript) -> Vec<u8> {
    t.eve.records.iter().flat_map(|r| r.outcomes.iter().map(|o| o.outcome)).collect()
}

/// Mutual information between Eve's recorded outcome tuples and the key
/// bits, over non-aborted sessions.
pub fn eve_mutual_information(transcripts: &[SessionTranscript]) -> Result<f64> {
    let (xs, ys): (Vec<Vec<u8>>, Vec<u8>) =
        transcripts.iter().filter(|t| !t.aborted).map(|t| (eve_outcome_tuple(t), t.bit)).unzip();
    mutual_information(&xs, &ys)
}

#[cfg(test)]
mod tests;
