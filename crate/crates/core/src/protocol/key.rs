use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::schedule::Party;
use crate::error::{Error, Result};

/// How padlock rotation angles are drawn.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AngleDistribution {
    /// Uniform on [0, 2π).
    #[default]
    ContinuousUniform,
    /// Uniform over the `levels` angles `j·π/levels`, `j = 0..levels`.
    /// A single level pins every angle to 0 (no encryption).
    DiscreteUniform { levels: u32 },
}

impl AngleDistribution {
    pub fn validate(&self) -> Result<()> {
        match self {
            AngleDistribution::DiscreteUniform { levels: 0 } => {
                Err(Error::invalid("discrete angle distribution needs at least one level"))
            }
            _ => Ok(()),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            AngleDistribution::ContinuousUniform => rng.random_range(0.0..2.0 * PI),
            AngleDistribution::DiscreteUniform { levels } => {
                let j = rng.random_range(0..levels.max(1));
                f64::from(j) * PI / f64::from(levels.max(1))
            }
        }
    }
}

/// One party's secret padlock angles for a single bit-session.
///
/// Keys stay at the party that drew them: the type has no serde impls and
/// its `Debug` output is redacted, so transcripts cannot carry key material.
#[derive(Clone, PartialEq)]
pub struct PadlockKey {
    party: Party,
    angles: Vec<f64>,
}

impl PadlockKey {
    pub fn new(party: Party, angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::invalid("a padlock key needs at least one angle"));
        }
        if let Some(bad) = angles.iter().find(|a| !a.is_finite()) {
            return Err(Error::invalid(format!("padlock angle {bad} is not finite")));
        }
        Ok(PadlockKey { party, angles })
    }

    pub fn generate<R: Rng + ?Sized>(party: Party, n: usize, dist: &AngleDistribution, rng: &mut R) -> Result<Self> {
        dist.validate()?;
        let angles = (0..n).map(|_| dist.sample(rng)).collect();
        PadlockKey::new(party, angles)
    }

    pub fn party(&self) -> Party {
        self.party
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }
}

impl fmt::Debug for PadlockKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PadlockKey")
            .field("party", &self.party)
            .field("angles", &format_args!("<{} redacted>", self.angles.len()))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn debug_output_is_redacted() {
        let key = PadlockKey::new(Party::Alice, vec![1.234567]).unwrap();
        let s = format!("{key:?}");
        assert!(!s.contains("1.23"));
        assert!(s.contains("redacted"));
    }

    #[test]
    fn discrete_levels() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let d = AngleDistribution::DiscreteUniform { levels: 2 };
        for _ in 0..100 {
            let a = d.sample(&mut rng);
            assert!(a == 0.0 || a == PI / 2.0);
        }
        let pinned = AngleDistribution::DiscreteUniform { levels: 1 };
        assert!((0..20).all(|_| pinned.sample(&mut rng) == 0.0));
        assert!(AngleDistribution::DiscreteUniform { levels: 0 }.validate().is_err());
    }

    #[test]
    fn continuous_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let key = PadlockKey::generate(Party::Bob, 1000, &AngleDistribution::ContinuousUniform, &mut rng).unwrap();
        assert!(key.angles().iter().all(|a| (0.0..2.0 * PI).contains(a)));
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(PadlockKey::new(Party::Alice, vec![]).is_err());
        assert!(PadlockKey::new(Party::Alice, vec![f64::NAN]).is_err());
    }
}
