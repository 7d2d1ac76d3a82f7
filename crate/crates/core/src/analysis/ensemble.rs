use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::protocol::{schedule_passes, Alice, Bob, PadlockKey, Party, SessionConfig};
use crate::qcore::{trace_distance, DensityOperator};

pub const MIN_ENSEMBLE_SAMPLES: usize = 1_000;

/// Trace distance between the averaged wire states for bit 0 and bit 1 at
/// `pass_index` of an honest run, estimated from `samples` sessions (bits
/// alternate, keys are fresh per session).
///
/// If the padlocks hide the bit, both averages tend to I/2 and the distance
/// goes to 0 as `O(1/√samples)`.
pub fn ensemble_distinguishability<R: Rng + ?Sized>(
    pass_index: usize,
    config: &SessionConfig,
    samples: usize,
    rng: &mut R,
) -> Result<f64> {
    config.validate()?;
    let schedule = schedule_passes(config.padlocks_per_party)?;
    if pass_index < 1 || pass_index > schedule.len() {
        return Err(Error::invalid(format!("pass {pass_index} outside 1..={}", schedule.len())));
    }
    if samples < MIN_ENSEMBLE_SAMPLES {
        return Err(Error::invalid(format!("need at least {MIN_ENSEMBLE_SAMPLES} samples, got {samples}")));
    }
    let n = config.padlocks_per_party;
    let zero = Complex64::new(0.0, 0.0);
    let mut sums = [DMatrix::from_element(2, 2, zero), DMatrix::from_element(2, 2, zero)];
    let mut counts = [0usize; 2];
    for i in 0..samples {
        let bit = (i % 2) as u8;
        let mut alice = Alice::new(PadlockKey::generate(Party::Alice, n, &config.angle_distribution, rng)?)?;
        let mut bob = Bob::new(PadlockKey::generate(Party::Bob, n, &config.angle_distribution, rng)?)?;
        let (mut channel, mut token) = alice.prepare(bit, i as u64)?;
        for pass in &schedule[1..pass_index] {
            token = match pass.sender {
                Party::Alice => alice.step(&mut channel, pass, token)?,
                Party::Bob => bob.step(&mut channel, pass, token)?,
            };
        }
        let qubit = channel.qubit_of(&token)?;
        let rho = channel.register().partial_trace(&[qubit])?;
        sums[usize::from(bit)] += rho.matrix();
        counts[usize::from(bit)] += 1;
    }
    let avg = |k: usize| DensityOperator::new(&sums[k] / Complex64::new(counts[k] as f64, 0.0));
    trace_distance(&avg(0)?, &avg(1)?)
}

/// `(5/6)^exchanges`: the per-exchange optimal cloning fidelity composed
/// multiplicatively over `exchanges` passes.
pub fn fidelity_budget(exchanges: u32) -> Result<f64> {
    if exchanges < 1 {
        return Err(Error::invalid("exchanges must be at least 1"));
    }
    Ok((5.0f64 / 6.0).powi(exchanges as i32))
}
