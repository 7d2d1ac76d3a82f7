//! Eavesdropper strategies.
//!
//! A strategy sees each pass through an [`EveToolbox`] and must forward
//! exactly one live token per pass. Built-ins: [`NoAttack`],
//! [`InterceptResend`], [`CloneAttack`] and [`FullMitm`]. Use
//! [`StrategySpec`] to select one by name and parameters.

mod spec;
mod strategies;
mod toolbox;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::protocol::{PassDescriptor, StateToken};

pub use spec::{BasisPolicy, CloneMeasurement, StrategySpec, KNOWN_STRATEGIES};
pub use strategies::{
    clone_attack, full_mitm, intercept_resend, no_attack, CloneAttack, FullMitm, InterceptResend, NoAttack,
};
pub use toolbox::{EveOutcome, EveRecord, EveToolbox};

/// Eve's final guess of the key bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EveGuess {
    pub bit: u8,
    pub confidence: f64,
}

pub trait AttackStrategy: Send {
    fn name(&self) -> &str;

    /// Called once per pass with the token in flight. Must call
    /// [`EveToolbox::forward`] exactly once with a live token.
    fn on_pass(
        &mut self,
        pass: &PassDescriptor,
        token: StateToken,
        toolbox: &mut EveToolbox<'_>,
        rng: &mut dyn RngCore,
    ) -> Result<()>;

    /// Called after Bob has measured. Stored qubits may still be measured.
    fn finalize(&mut self, toolbox: &mut EveToolbox<'_>, rng: &mut dyn RngCore) -> Result<EveGuess>;

    fn records(&self) -> &[EveRecord];
}
