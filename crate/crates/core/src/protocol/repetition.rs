use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::session::SessionTranscript;
use crate::error::{Error, Result};

/// Counts of logical bits whose repeated copies disagreed at Bob.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MismatchTally {
    pub mismatched: u64,
    pub groups: u64,
}

impl MismatchTally {
    pub fn rate(&self) -> f64 {
        if self.groups == 0 {
            0.0
        } else {
            self.mismatched as f64 / self.groups as f64
        }
    }

    pub fn merge(self, other: MismatchTally) -> MismatchTally {
        MismatchTally { mismatched: self.mismatched + other.mismatched, groups: self.groups + other.groups }
    }
}

/// Groups transcripts by logical bit and counts groups whose `r` received
/// copies are not all equal. Groups with an aborted copy, or with fewer
/// than `r` copies, are left out.
///
/// The comparison of Bob's copies happens outside the simulated protocol;
/// it is an analysis step, not a modeled channel.
pub fn repetition_check(transcripts: &[SessionTranscript], r: usize) -> Result<MismatchTally> {
    if r < 1 {
        return Err(Error::invalid("repetition factor must be at least 1"));
    }
    let mut groups: BTreeMap<u64, Vec<Option<u8>>> = BTreeMap::new();
    for t in transcripts {
        groups.entry(t.bit_index).or_default().push(if t.aborted { None } else { t.bob_outcome });
    }
    let mut tally = MismatchTally::default();
    for copies in groups.values() {
        if copies.len() < r || copies.iter().any(Option::is_none) {
            continue;
        }
        tally.groups += 1;
        let first = copies[0];
        if copies[..r].iter().any(|&c| c != first) {
            tally.mismatched += 1;
        }
    }
    Ok(tally)
}
