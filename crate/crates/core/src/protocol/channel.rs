use rand::Rng;

use crate::error::{Error, Result};
use crate::qcore::{MeasurementRecord, QuantumRegister, RotationGate};

/// Opaque, single-use handle to one qubit of a session register.
///
/// Every operation on the qubit consumes the token and issues a new one;
/// presenting a consumed (stale) token is a protocol violation. Tokens carry
/// no state information, so copying one copies nothing physical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateToken {
    session_id: u64,
    serial: u64,
}

impl StateToken {
    pub fn session_id(&self) -> u64 {
        self.session_id
    }
}

/// Three tokens produced by cloning a wire qubit.
#[derive(Debug)]
pub struct ClonedTokens {
    /// The original slot, normally sent on.
    pub original: StateToken,
    pub clone: StateToken,
    pub machine: StateToken,
}

/// The session-owned register plus its token table. This is the simulated
/// wire: everything that travels between the parties is a token into it.
#[derive(Debug)]
pub struct Channel {
    session_id: u64,
    register: QuantumRegister,
    live: Vec<(u64, usize)>,
    next_serial: u64,
}

impl Channel {
    /// Fresh single-qubit register in |bit⟩ and the token for that qubit.
    pub fn prepare(session_id: u64, bit: u8) -> (Channel, StateToken) {
        let mut channel =
            Channel { session_id, register: QuantumRegister::qubit(bit), live: Vec::new(), next_serial: 0 };
        let token = channel.issue(0);
        (channel, token)
    }

    pub fn session_id(&self) -> u64 {
        self.session_id
    }

    /// Read-only analysis view of the full register. Never handed to
    /// adversary strategies.
    pub fn register(&self) -> &QuantumRegister {
        &self.register
    }

    pub fn is_live(&self, token: &StateToken) -> bool {
        token.session_id == self.session_id && self.live.iter().any(|&(s, _)| s == token.serial)
    }

    pub fn live_tokens(&self) -> usize {
        self.live.len()
    }

    /// Register index behind a live token, for analysis only.
    pub fn qubit_of(&self, token: &StateToken) -> Result<usize> {
        self.lookup(token).map(|(_, q)| q)
    }

    fn lookup(&self, token: &StateToken) -> Result<(usize, usize)> {
        if token.session_id != self.session_id {
            return Err(Error::violation(format!(
                "token from session {} presented to session {}",
                token.session_id, self.session_id
            )));
        }
        self.live
            .iter()
            .position(|&(s, _)| s == token.serial)
            .map(|pos| (pos, self.live[pos].1))
            .ok_or_else(|| Error::violation(format!("stale token #{} reused", token.serial)))
    }

    pub(crate) fn consume(&mut self, token: StateToken) -> Result<usize> {
        let (pos, qubit) = self.lookup(&token)?;
        self.live.swap_remove(pos);
        Ok(qubit)
    }

    fn issue(&mut self, qubit: usize) -> StateToken {
        let serial = self.next_serial;
        self.next_serial += 1;
        self.live.push((serial, qubit));
        StateToken { session_id: self.session_id, serial }
    }

    pub(crate) fn rotate(&mut self, token: StateToken, theta: f64) -> Result<StateToken> {
        let gate = RotationGate::new(theta)?;
        let qubit = self.consume(token)?;
        self.register.apply_gate(qubit, &gate)?;
        Ok(self.issue(qubit))
    }

    pub(crate) fn measure<R: Rng + ?Sized>(
        &mut self,
        token: StateToken,
        basis_angle: f64,
        rng: &mut R,
    ) -> Result<(MeasurementRecord, StateToken)> {
        RotationGate::new(basis_angle)?;
        let qubit = self.consume(token)?;
        let record = self.register.measure(qubit, basis_angle, rng)?;
        Ok((record, self.issue(qubit)))
    }

    pub(crate) fn depolarize<R: Rng + ?Sized>(&mut self, token: StateToken, p: f64, rng: &mut R) -> Result<StateToken> {
        let qubit = self.consume(token)?;
        self.register.depolarize_qubit(qubit, p, rng)?;
        Ok(self.issue(qubit))
    }

    pub(crate) fn clone_qubit(&mut self, token: StateToken) -> Result<ClonedTokens> {
        let (_, qubit) = self.lookup(&token)?;
        let (clone, machine) = self.register.uqcm_clone(qubit)?;
        self.consume(token)?;
        Ok(ClonedTokens { original: self.issue(qubit), clone: self.issue(clone), machine: self.issue(machine) })
    }

    /// Attaches a new qubit prepared in R(angle)|bit⟩.
    pub(crate) fn mint(&mut self, bit: u8, angle: f64) -> Result<StateToken> {
        let gate = RotationGate::new(angle)?;
        let qubit = self.register.attach_qubits(1)?;
        if bit & 1 == 1 {
            self.register.apply_gate(qubit, &RotationGate::quarter_turn())?;
        }
        self.register.apply_gate(qubit, &gate)?;
        Ok(self.issue(qubit))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tokens_are_single_use() {
        let (mut ch, t0) = Channel::prepare(7, 0);
        let copy = t0.clone();
        let t1 = ch.rotate(t0, 0.3).unwrap();
        assert!(!ch.is_live(&copy));
        assert!(matches!(ch.rotate(copy, 0.1), Err(Error::ProtocolViolation(_))));
        assert!(ch.is_live(&t1));
        assert_eq!(ch.live_tokens(), 1);
    }

    #[test]
    fn foreign_session_token_rejected() {
        let (_a, ta) = Channel::prepare(1, 0);
        let (mut b, _tb) = Channel::prepare(2, 0);
        assert!(matches!(b.rotate(ta, 0.1), Err(Error::ProtocolViolation(_))));
    }

    #[test]
    fn clone_issues_three_tokens() {
        let (mut ch, t) = Channel::prepare(0, 1);
        let c = ch.clone_qubit(t).unwrap();
        assert_eq!(ch.live_tokens(), 3);
        assert_eq!(ch.register().num_qubits(), 3);
        assert_eq!(ch.qubit_of(&c.original).unwrap(), 0);
        assert_eq!(ch.qubit_of(&c.clone).unwrap(), 1);
        assert_eq!(ch.qubit_of(&c.machine).unwrap(), 2);
    }

    #[test]
    fn minted_qubit_state() {
        let (mut ch, _t) = Channel::prepare(0, 0);
        let m = ch.mint(1, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (rec, _) = ch.measure(m, 0.0, &mut rng).unwrap();
        assert_eq!(rec.outcome, 1);
        assert_eq!(rec.probability_of_outcome, 1.0);
    }
}
