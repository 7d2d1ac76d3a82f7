use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, RngCore};

use super::spec::{BasisPolicy, CloneMeasurement};
use super::toolbox::{EveOutcome, EveRecord, EveToolbox};
use super::{AttackStrategy, EveGuess};
use crate::error::{Error, Result};
use crate::protocol::{PadlockAction, PassDescriptor, StateToken};

fn coin(rng: &mut dyn RngCore) -> EveGuess {
    EveGuess { bit: u8::from(rng.random::<bool>()), confidence: 0.5 }
}

/// Forwards everything untouched and guesses with a fair coin.
#[derive(Debug, Default)]
pub struct NoAttack;

pub fn no_attack() -> NoAttack {
    NoAttack
}

impl AttackStrategy for NoAttack {
    fn name(&self) -> &str {
        "no_attack"
    }

    fn on_pass(
        &mut self,
        _: &PassDescriptor,
        token: StateToken,
        toolbox: &mut EveToolbox<'_>,
        _: &mut dyn RngCore,
    ) -> Result<()> {
        toolbox.forward(token);
        Ok(())
    }

    fn finalize(&mut self, _: &mut EveToolbox<'_>, rng: &mut dyn RngCore) -> Result<EveGuess> {
        Ok(coin(rng))
    }

    fn records(&self) -> &[EveRecord] {
        &[]
    }
}

/// Measures the in-flight qubit on the selected passes and sends on a fresh
/// qubit prepared in the collapsed basis state.
#[derive(Debug)]
pub struct InterceptResend {
    policy: BasisPolicy,
    passes: BTreeSet<usize>,
    held: Vec<StateToken>,
    records: Vec<EveRecord>,
}

pub fn intercept_resend(policy: BasisPolicy, passes: &[usize]) -> Result<InterceptResend> {
    if passes.is_empty() {
        return Err(Error::Config("intercept_resend needs at least one pass".into()));
    }
    if passes.contains(&0) {
        return Err(Error::Config("pass indices start at 1".into()));
    }
    policy.validate()?;
    Ok(InterceptResend { policy, passes: passes.iter().copied().collect(), held: Vec::new(), records: Vec::new() })
}

impl AttackStrategy for InterceptResend {
    fn name(&self) -> &str {
        "intercept_resend"
    }

    fn on_pass(
        &mut self,
        pass: &PassDescriptor,
        token: StateToken,
        toolbox: &mut EveToolbox<'_>,
        rng: &mut dyn RngCore,
    ) -> Result<()> {
        if !self.passes.contains(&pass.index) {
            toolbox.forward(token);
            return Ok(());
        }
        let angle = match self.policy {
            BasisPolicy::Fixed(phi) => phi,
            BasisPolicy::UniformRandom => rng.random_range(0.0..PI),
        };
        let (seen, spent) = toolbox.measure(token, angle, rng)?;
        self.held.push(spent);
        let fresh = toolbox.mint(seen.outcome, angle)?;
        toolbox.forward(fresh);
        self.records.push(EveRecord {
            pass_index: Some(pass.index),
            action: "intercept_resend".into(),
            outcomes: vec![seen],
            stored_clones: 0,
        });
        Ok(())
    }

    fn finalize(&mut self, _: &mut EveToolbox<'_>, rng: &mut dyn RngCore) -> Result<EveGuess> {
        // The first outcome is the only plausible estimator; it is
        // independent of the key bit.
        match self.records.first().and_then(|r| r.outcomes.first()) {
            Some(o) => Ok(EveGuess { bit: o.outcome, confidence: 0.5 }),
            None => Ok(coin(rng)),
        }
    }

    fn records(&self) -> &[EveRecord] {
        &self.records
    }
}

/// Runs the universal cloner on selected passes, forwards one copy and keeps
/// the other (plus the machine qubit).
#[derive(Debug)]
pub struct CloneAttack {
    passes: BTreeSet<usize>,
    measurement: CloneMeasurement,
    kept: Vec<(StateToken, StateToken)>,
    records: Vec<EveRecord>,
}

/// Each clone adds two qubits to an 8-qubit register, so at most three
/// passes can be cloned.
pub const MAX_CLONED_PASSES: usize = 3;

pub fn clone_attack(passes: &[usize], measurement: CloneMeasurement) -> Result<CloneAttack> {
    let set: BTreeSet<usize> = passes.iter().copied().collect();
    if set.is_empty() {
        return Err(Error::Config("clone_attack needs at least one pass".into()));
    }
    if set.contains(&0) {
        return Err(Error::Config("pass indices start at 1".into()));
    }
    if set.len() > MAX_CLONED_PASSES {
        return Err(Error::Config(format!(
            "clone_attack can clone at most {MAX_CLONED_PASSES} passes within register capacity, got {}",
            set.len()
        )));
    }
    Ok(CloneAttack { passes: set, measurement, kept: Vec::new(), records: Vec::new() })
}

impl CloneAttack {
    /// Tokens of the clones Eve kept, in pass order.
    pub fn kept_clones(&self) -> impl Iterator<Item = &StateToken> {
        self.kept.iter().map(|(c, _)| c)
    }
}

impl AttackStrategy for CloneAttack {
    fn name(&self) -> &str {
        "clone_attack"
    }

    fn on_pass(
        &mut self,
        pass: &PassDescriptor,
        token: StateToken,
        toolbox: &mut EveToolbox<'_>,
        _: &mut dyn RngCore,
    ) -> Result<()> {
        if !self.passes.contains(&pass.index) {
            toolbox.forward(token);
            return Ok(());
        }
        let copies = toolbox.clone_qubit(token)?;
        toolbox.forward(copies.original);
        self.kept.push((copies.clone, copies.machine));
        self.records.push(EveRecord {
            pass_index: Some(pass.index),
            action: "clone".into(),
            outcomes: Vec::new(),
            stored_clones: self.kept.len(),
        });
        Ok(())
    }

    fn finalize(&mut self, toolbox: &mut EveToolbox<'_>, rng: &mut dyn RngCore) -> Result<EveGuess> {
        if self.measurement == CloneMeasurement::Defer || self.kept.is_empty() {
            return Ok(coin(rng));
        }
        let mut outcomes: Vec<EveOutcome> = Vec::with_capacity(self.kept.len());
        for (clone, _machine) in std::mem::take(&mut self.kept) {
            let (seen, _) = toolbox.measure(clone, 0.0, rng)?;
            outcomes.push(seen);
        }
        let ones = outcomes.iter().filter(|o| o.outcome == 1).count();
        let zeros = outcomes.len() - ones;
        let guess = match ones.cmp(&zeros) {
            std::cmp::Ordering::Greater => EveGuess { bit: 1, confidence: ones as f64 / outcomes.len() as f64 },
            std::cmp::Ordering::Less => EveGuess { bit: 0, confidence: zeros as f64 / outcomes.len() as f64 },
            std::cmp::Ordering::Equal => coin(rng),
        };
        self.records.push(EveRecord { pass_index: None, action: "measure_clones".into(), outcomes, stored_clones: 0 });
        Ok(guess)
    }

    fn records(&self) -> &[EveRecord] {
        &self.records
    }
}

/// Man in the middle: Eve completes an honest run with Alice while playing
/// Bob, learns the bit, and completes a second honest run with Bob while
/// playing Alice.
///
/// On Bob's side she starts him on a decoy |0⟩ under her own padlock, and
/// once she knows the bit she turns his still-locked qubit into |bit⟩ with
/// a quarter turn, which commutes past Bob's padlocks.
#[derive(Debug, Default)]
pub struct FullMitm {
    total_passes: usize,
    alice_lock: f64,
    bob_decoy_lock: f64,
    alice_side: Option<StateToken>,
    bob_side: Option<StateToken>,
    learned: Option<u8>,
    records: Vec<EveRecord>,
}

pub fn full_mitm() -> FullMitm {
    FullMitm::default()
}

impl FullMitm {
    fn take(slot: &mut Option<StateToken>, what: &str) -> Result<StateToken> {
        slot.take().ok_or_else(|| Error::violation(format!("full_mitm lost track of the {what} qubit")))
    }
}

impl AttackStrategy for FullMitm {
    fn name(&self) -> &str {
        "full_mitm"
    }

    fn on_pass(
        &mut self,
        pass: &PassDescriptor,
        token: StateToken,
        toolbox: &mut EveToolbox<'_>,
        rng: &mut dyn RngCore,
    ) -> Result<()> {
        let mut record =
            EveRecord { pass_index: Some(pass.index), action: String::new(), outcomes: Vec::new(), stored_clones: 0 };
        match pass.index {
            1 => {
                if let PadlockAction::ApplyAll { count } = pass.action {
                    self.total_passes = 2 * count + 1;
                }
                self.alice_lock = rng.random_range(0.0..2.0 * PI);
                self.bob_decoy_lock = rng.random_range(0.0..2.0 * PI);
                self.alice_side = Some(toolbox.rotate(token, self.alice_lock)?);
                let decoy = toolbox.mint(0, self.bob_decoy_lock)?;
                toolbox.forward(decoy);
                record.action = "lock_alice+send_decoy".into();
            }
            2 => {
                self.bob_side = Some(toolbox.rotate(token, -self.bob_decoy_lock)?);
                toolbox.forward(Self::take(&mut self.alice_side, "Alice-side")?);
                record.action = "hold_bob+return_alice".into();
            }
            k if k == self.total_passes => {
                let unlocked = toolbox.rotate(token, -self.alice_lock)?;
                let (seen, _) = toolbox.measure(unlocked, 0.0, rng)?;
                self.learned = Some(seen.outcome);
                record.outcomes.push(seen);
                let bob = Self::take(&mut self.bob_side, "Bob-side")?;
                let bob = toolbox.rotate(bob, f64::from(seen.outcome) * FRAC_PI_2)?;
                toolbox.forward(bob);
                record.action = "read_bit+relay".into();
            }
            k if k % 2 == 1 => {
                self.alice_side = Some(token);
                toolbox.forward(Self::take(&mut self.bob_side, "Bob-side")?);
                record.action = "swap".into();
            }
            _ => {
                self.bob_side = Some(token);
                toolbox.forward(Self::take(&mut self.alice_side, "Alice-side")?);
                record.action = "swap".into();
            }
        }
        self.records.push(record);
        Ok(())
    }

    fn finalize(&mut self, _: &mut EveToolbox<'_>, rng: &mut dyn RngCore) -> Result<EveGuess> {
        Ok(match self.learned {
            Some(bit) => EveGuess { bit, confidence: 1.0 },
            None => coin(rng),
        })
    }

    fn records(&self) -> &[EveRecord] {
        &self.records
    }
}
