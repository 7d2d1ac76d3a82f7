use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::{Channel, ClonedTokens, StateToken};

/// An outcome Eve observed, with the basis she chose. Born probabilities
/// are deliberately absent: they would leak amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EveOutcome {
    pub outcome: u8,
    pub basis_angle: f64,
}

/// One adversary action. `pass_index` is `None` for work done after the
/// session ended (e.g. measuring stored clones).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EveRecord {
    pub pass_index: Option<usize>,
    pub action: String,
    pub outcomes: Vec<EveOutcome>,
    pub stored_clones: usize,
}

/// The physics-limited interface an eavesdropper gets to a session.
///
/// It exposes rotations, measurements, the universal cloner, fresh qubit
/// preparation and forwarding, all through single-use tokens. There is no
/// way to read amplitudes or to copy a qubit exactly.
pub struct EveToolbox<'a> {
    channel: &'a mut Channel,
    pass_index: Option<usize>,
    forwarded: Vec<StateToken>,
    actions: Vec<&'static str>,
}

impl<'a> EveToolbox<'a> {
    pub fn new(channel: &'a mut Channel, pass_index: Option<usize>) -> Self {
        EveToolbox { channel, pass_index, forwarded: Vec::new(), actions: Vec::new() }
    }

    pub fn pass_index(&self) -> Option<usize> {
        self.pass_index
    }

    pub fn rotate(&mut self, token: StateToken, theta: f64) -> Result<StateToken> {
        self.actions.push("rotate");
        self.channel.rotate(token, theta)
    }

    pub fn measure<R: Rng + ?Sized>(
        &mut self,
        token: StateToken,
        basis_angle: f64,
        rng: &mut R,
    ) -> Result<(EveOutcome, StateToken)> {
        self.actions.push("measure");
        let (record, token) = self.channel.measure(token, basis_angle, rng)?;
        Ok((EveOutcome { outcome: record.outcome, basis_angle }, token))
    }

    pub fn clone_qubit(&mut self, token: StateToken) -> Result<ClonedTokens> {
        self.actions.push("clone");
        self.channel.clone_qubit(token)
    }

    /// Prepares a fresh qubit in R(angle)|bit⟩.
    pub fn mint(&mut self, bit: u8, angle: f64) -> Result<StateToken> {
        self.actions.push("mint");
        self.channel.mint(bit, angle)
    }

    /// Hands a token to the intended recipient of this pass. Exactly one
    /// forward per pass is legal; anything else aborts the session.
    pub fn forward(&mut self, token: StateToken) {
        self.forwarded.push(token);
    }

    pub(crate) fn finish(self) -> (String, Result<StateToken>) {
        let tag = if self.actions.is_empty() { "none".to_string() } else { self.actions.join("+") };
        let mut forwarded = self.forwarded;
        let result = match forwarded.len() {
            1 => {
                let token = forwarded.pop().expect("one token");
                if self.channel.is_live(&token) {
                    Ok(token)
                } else {
                    Err(Error::violation("adversary forwarded a stale token"))
                }
            }
            k => Err(Error::violation(format!("adversary forwarded {k} tokens instead of one"))),
        };
        (tag, result)
    }
}
