use rand::Rng;

use super::channel::{Channel, StateToken};
use super::key::PadlockKey;
use super::schedule::{PadlockAction, Party, PassDescriptor};
use crate::error::{Error, Result};
use crate::qcore::MeasurementRecord;

/// Padlock bookkeeping shared by both parties.
#[derive(Debug)]
struct Padlocks {
    key: PadlockKey,
    applied: bool,
    removed: Vec<bool>,
    next_pass: usize,
}

impl Padlocks {
    fn new(key: PadlockKey, expected: Party, first_pass: usize) -> Result<Self> {
        if key.party() != expected {
            return Err(Error::invalid(format!("{:?} cannot use a {:?} key", expected, key.party())));
        }
        let n = key.len();
        Ok(Padlocks { key, applied: false, removed: vec![false; n], next_pass: first_pass })
    }

    fn apply_all(&mut self, channel: &mut Channel, mut token: StateToken) -> Result<StateToken> {
        for &angle in self.key.angles() {
            token = channel.rotate(token, angle)?;
        }
        self.applied = true;
        Ok(token)
    }

    fn remove(&mut self, channel: &mut Channel, slot: usize, token: StateToken) -> Result<StateToken> {
        if !self.applied {
            return Err(Error::violation("padlock removed before it was applied"));
        }
        match self.removed.get(slot) {
            None => return Err(Error::violation(format!("no padlock in slot {slot}"))),
            Some(true) => return Err(Error::violation(format!("padlock {slot} already removed"))),
            Some(false) => {}
        }
        let token = channel.rotate(token, -self.key.angles()[slot])?;
        self.removed[slot] = true;
        Ok(token)
    }

    fn step(
        &mut self,
        who: Party,
        channel: &mut Channel,
        pass: &PassDescriptor,
        token: StateToken,
    ) -> Result<StateToken> {
        if pass.sender != who {
            return Err(Error::violation(format!("pass {} belongs to {:?}, not {:?}", pass.index, pass.sender, who)));
        }
        if pass.index != self.next_pass {
            return Err(Error::violation(format!(
                "{:?} expected pass {} but was handed pass {}",
                who, self.next_pass, pass.index
            )));
        }
        let token = match pass.action {
            PadlockAction::ApplyAll { count } => {
                if self.applied || count != self.key.len() {
                    return Err(Error::violation("padlocks applied twice or with the wrong count"));
                }
                self.apply_all(channel, token)?
            }
            PadlockAction::Remove { slot } => self.remove(channel, slot, token)?,
        };
        self.next_pass += 2;
        Ok(token)
    }
}

/// The sender. Owns her padlock key for one bit-session.
#[derive(Debug)]
pub struct Alice {
    locks: Padlocks,
}

impl Alice {
    pub fn new(key: PadlockKey) -> Result<Self> {
        Ok(Alice { locks: Padlocks::new(key, Party::Alice, 1)? })
    }

    /// Prepares |bit⟩ in a fresh session register and applies all of her
    /// padlocks (pass 1). The returned token is what goes on the wire.
    pub fn prepare(&mut self, bit: u8, session_id: u64) -> Result<(Channel, StateToken)> {
        if bit > 1 {
            return Err(Error::invalid(format!("bit must be 0 or 1, got {bit}")));
        }
        if self.locks.applied {
            return Err(Error::violation("Alice already prepared a qubit this session"));
        }
        let (mut channel, token) = Channel::prepare(session_id, bit);
        let token = self.locks.apply_all(&mut channel, token)?;
        self.locks.next_pass = 3;
        Ok((channel, token))
    }

    pub fn step(&mut self, channel: &mut Channel, pass: &PassDescriptor, token: StateToken) -> Result<StateToken> {
        self.locks.step(Party::Alice, channel, pass, token)
    }
}

/// The receiver. Owns his padlock key and does the final measurement.
#[derive(Debug)]
pub struct Bob {
    locks: Padlocks,
}

impl Bob {
    pub fn new(key: PadlockKey) -> Result<Self> {
        Ok(Bob { locks: Padlocks::new(key, Party::Bob, 2)? })
    }

    pub fn step(&mut self, channel: &mut Channel, pass: &PassDescriptor, token: StateToken) -> Result<StateToken> {
        self.locks.step(Party::Bob, channel, pass, token)
    }

    /// Removes Bob's last padlock and measures in the {|0⟩, |1⟩} basis.
    /// Only valid after the final pass has arrived.
    pub fn finalize<R: Rng + ?Sized>(
        &mut self,
        channel: &mut Channel,
        token: StateToken,
        rng: &mut R,
    ) -> Result<MeasurementRecord> {
        let n = self.locks.key.len();
        // Bob's last own pass is 2n; the final pass 2n+1 comes from Alice.
        if self.locks.next_pass != 2 * n + 2 {
            return Err(Error::violation("Bob finalized before the final pass"));
        }
        let token = self.locks.remove(channel, n - 1, token)?;
        if self.locks.removed.iter().any(|r| !r) {
            return Err(Error::violation("Bob still holds unremoved padlocks"));
        }
        let (record, _) = channel.measure(token, 0.0, rng)?;
        self.locks.next_pass = usize::MAX;
        Ok(record)
    }
}
