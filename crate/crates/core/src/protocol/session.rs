use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::channel::StateToken;
use super::key::{AngleDistribution, PadlockKey};
use super::party::{Alice, Bob};
use super::schedule::{schedule_passes, Direction, Party, PassDescriptor};
use crate::adversary::{AttackStrategy, EveRecord, EveToolbox};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig {
    pub padlocks_per_party: usize,
    pub repetition_factor: usize,
    pub channel_depolarize_p: f64,
    pub angle_distribution: AngleDistribution,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            padlocks_per_party: 1,
            repetition_factor: 1,
            channel_depolarize_p: 0.0,
            angle_distribution: AngleDistribution::ContinuousUniform,
        }
    }
}

impl SessionConfig {
    pub fn with_padlocks(n: usize) -> Self {
        SessionConfig { padlocks_per_party: n, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.padlocks_per_party < 1 {
            return Err(Error::invalid("padlocks_per_party must be at least 1"));
        }
        if self.repetition_factor < 1 {
            return Err(Error::invalid("repetition_factor must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.channel_depolarize_p) {
            return Err(Error::invalid("channel_depolarize_p must lie in [0, 1]"));
        }
        self.angle_distribution.validate()
    }

    pub fn pass_count(&self) -> usize {
        2 * self.padlocks_per_party + 1
    }
}

/// Public record of one pass. Only the pass index, direction and a tag for
/// what the adversary did appear here; no state or key data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassEvent {
    pub pass_index: usize,
    pub direction: Direction,
    pub adversary_action_tag: String,
    pub timestamp_index: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EveLog {
    pub strategy: String,
    pub guess: Option<u8>,
    pub confidence: Option<f64>,
    pub records: Vec<EveRecord>,
}

/// Everything observable about one bit-session, one JSON object per line
/// in `transcripts.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionTranscript {
    pub session_id: u64,
    pub master_seed: u64,
    pub session_index: u64,
    /// Logical bit this session carries; repeated sends share it.
    pub bit_index: u64,
    pub n: usize,
    pub bit: u8,
    pub events: Vec<PassEvent>,
    pub bob_outcome: Option<u8>,
    pub aborted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
    pub eve: EveLog,
    /// Largest register size reached during the session.
    pub peak_qubits: usize,
}

impl SessionTranscript {
    pub fn is_error(&self) -> Option<bool> {
        self.bob_outcome.map(|o| o != self.bit)
    }
}

/// Draws fresh keys for both parties and runs one session.
pub fn run_session<R: RngCore>(
    config: &SessionConfig,
    bit: u8,
    adversary: &mut dyn AttackStrategy,
    session_id: u64,
    rng: &mut R,
) -> Result<SessionTranscript> {
    config.validate()?;
    let n = config.padlocks_per_party;
    let alice_key = PadlockKey::generate(Party::Alice, n, &config.angle_distribution, rng)?;
    let bob_key = PadlockKey::generate(Party::Bob, n, &config.angle_distribution, rng)?;
    run_session_with_keys(config, bit, alice_key, bob_key, adversary, session_id, rng)
}

/// Runs the full `2n + 1` pass schedule with the given keys.
///
/// Configuration problems are returned as errors. Protocol violations during
/// the run (stale tokens, wrong forward counts, capacity overflows caused by
/// the adversary) abort the session and are flagged in the transcript.
pub fn run_session_with_keys<R: RngCore>(
    config: &SessionConfig,
    bit: u8,
    alice_key: PadlockKey,
    bob_key: PadlockKey,
    adversary: &mut dyn AttackStrategy,
    session_id: u64,
    rng: &mut R,
) -> Result<SessionTranscript> {
    config.validate()?;
    if bit > 1 {
        return Err(Error::invalid(format!("bit must be 0 or 1, got {bit}")));
    }
    let n = config.padlocks_per_party;
    if alice_key.len() != n || bob_key.len() != n {
        return Err(Error::invalid("key length does not match padlocks_per_party"));
    }
    let schedule = schedule_passes(n)?;
    let mut alice = Alice::new(alice_key)?;
    let mut bob = Bob::new(bob_key)?;

    let mut transcript = SessionTranscript {
        session_id,
        master_seed: 0,
        session_index: session_id,
        bit_index: session_id,
        n,
        bit,
        events: Vec::with_capacity(schedule.len()),
        bob_outcome: None,
        aborted: false,
        violation: None,
        eve: EveLog { strategy: adversary.name().to_string(), guess: None, confidence: None, records: Vec::new() },
        peak_qubits: 1,
    };

    let (mut channel, token) = alice.prepare(bit, session_id)?;
    let rng: &mut dyn RngCore = rng;
    let mut token = Some(token);

    let outcome: Result<()> = (|| {
        for pass in &schedule {
            let mut t = token.take().expect("token in flight");
            if pass.index > 1 {
                t = match pass.sender {
                    Party::Alice => alice.step(&mut channel, pass, t)?,
                    Party::Bob => bob.step(&mut channel, pass, t)?,
                };
            }
            t = channel.depolarize(t, config.channel_depolarize_p, rng)?;
            let (tag, delivered) = intercept(&mut channel, pass, t, adversary, rng);
            transcript.peak_qubits = transcript.peak_qubits.max(channel.register().num_qubits());
            transcript.events.push(PassEvent {
                pass_index: pass.index,
                direction: pass.direction,
                adversary_action_tag: tag,
                timestamp_index: (pass.index - 1) as u64,
            });
            token = Some(delivered?);
        }
        let record = bob.finalize(&mut channel, token.take().expect("final token"), rng)?;
        transcript.bob_outcome = Some(record.outcome);
        Ok(())
    })();

    match outcome {
        Ok(()) => {
            let mut toolbox = EveToolbox::new(&mut channel, None);
            match adversary.finalize(&mut toolbox, rng) {
                Ok(guess) => {
                    transcript.eve.guess = Some(guess.bit);
                    transcript.eve.confidence = Some(guess.confidence);
                }
                Err(e) => {
                    transcript.aborted = true;
                    transcript.violation = Some(e.to_string());
                }
            }
        }
        Err(e) => {
            transcript.aborted = true;
            transcript.bob_outcome = None;
            transcript.violation = Some(e.to_string());
        }
    }
    transcript.peak_qubits = transcript.peak_qubits.max(channel.register().num_qubits());
    transcript.eve.records = adversary.records().to_vec();
    Ok(transcript)
}

fn intercept(
    channel: &mut super::channel::Channel,
    pass: &PassDescriptor,
    token: StateToken,
    adversary: &mut dyn AttackStrategy,
    rng: &mut dyn RngCore,
) -> (String, Result<StateToken>) {
    let mut toolbox = EveToolbox::new(channel, Some(pass.index));
    let hook = adversary.on_pass(pass, token, &mut toolbox, rng);
    let (tag, forwarded) = toolbox.finish();
    (tag, hook.and(forwarded))
}
