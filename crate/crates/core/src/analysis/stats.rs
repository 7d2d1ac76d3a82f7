use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// A Bernoulli count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proportion {
    pub successes: u64,
    pub trials: u64,
}

impl Proportion {
    pub fn new(successes: u64, trials: u64) -> Result<Self> {
        if successes > trials {
            return Err(Error::invalid("more successes than trials"));
        }
        Ok(Proportion { successes, trials })
    }

    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    /// Associative merge of two counts.
    pub fn merge(self, other: Proportion) -> Proportion {
        Proportion { successes: self.successes + other.successes, trials: self.trials + other.trials }
    }

    /// Wilson score interval at normal quantile `z`.
    pub fn wilson(&self, z: f64) -> (f64, f64) {
        if self.trials == 0 {
            return (0.0, 1.0);
        }
        let n = self.trials as f64;
        let p = self.rate();
        let z2 = z * z;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
        let low = if self.successes == 0 { 0.0 } else { (center - half).max(0.0) };
        let high = if self.successes == self.trials { 1.0 } else { (center + half).min(1.0) };
        (low, high)
    }

    pub fn summarize(&self) -> Rate {
        let (ci_low, ci_high) = self.wilson(Z95);
        Rate { value: self.rate(), ci_low, ci_high, successes: self.successes, trials: self.trials }
    }
}

/// A rate with its Wilson 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub successes: u64,
    pub trials: u64,
}

impl Rate {
    /// Binomial standard error at an assumed true rate `p`.
    pub fn standard_error_at(&self, p: f64) -> f64 {
        standard_error(p, self.trials)
    }

    /// `|value − p| ≤ k · SE(p)`.
    pub fn within_se_of(&self, p: f64, k: f64) -> bool {
        (self.value - p).abs() <= k * self.standard_error_at(p)
    }
}

pub fn standard_error(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_count_interval_is_small_and_anchored() {
        let r = Proportion::new(0, 10_000).unwrap().summarize();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.ci_low, 0.0);
        // z²/(N + z²) ≈ 3.84/N
        assert!(r.ci_high > 3.0 / 10_000.0 && r.ci_high < 4.0 / 10_000.0);
    }

    #[test]
    fn known_value() {
        // 25 / 100: Wilson 95% interval [0.1755, 0.3430]
        let (lo, hi) = Proportion::new(25, 100).unwrap().wilson(Z95);
        assert!((lo - 0.17548).abs() < 1e-4, "{lo}");
        assert!((hi - 0.34299).abs() < 1e-4, "{hi}");
    }

    #[test]
    fn wilson_coverage_for_quarter_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(2025);
        let mut covered = 0;
        for _ in 0..1000 {
            let hits = (0..10_000).filter(|_| rng.random::<f64>() < 0.25).count() as u64;
            let (lo, hi) = Proportion::new(hits, 10_000).unwrap().wilson(Z95);
            assert!(lo <= hi);
            if lo <= 0.25 && 0.25 <= hi {
                covered += 1;
            }
        }
        assert!(covered >= 930, "coverage {covered}/1000");
    }

    #[test]
    fn invalid_counts() {
        assert!(Proportion::new(3, 2).is_err());
        assert_eq!(Proportion::default().wilson(Z95), (0.0, 1.0));
    }
}
