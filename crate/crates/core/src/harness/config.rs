use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::adversary::StrategySpec;
use crate::error::{Error, Result};
use crate::protocol::{AngleDistribution, SessionConfig};

/// Whether repeated sends of a logical bit draw fresh padlocks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeyPolicy {
    #[default]
    Fresh,
    /// Every copy of a logical bit uses the same padlock angles. Offered for
    /// comparison only; its security is not analyzed.
    ReuseAcrossRepetitions,
}

/// One experiment, as read from a JSON config file.
///
/// ```json
/// {
///   "n": 1,
///   "sessions": 10000,
///   "repetition_factor": 2,
///   "strategy": { "name": "clone_attack", "params": { "passes": [1] } },
///   "channel_depolarize_p": 0.0,
///   "angle_distribution": { "kind": "continuous_uniform" },
///   "master_seed": 7,
///   "out_dir": "out/clone"
/// }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "one")]
    pub n: usize,
    /// Logical bits to send; each is sent `repetition_factor` times.
    pub sessions: u64,
    #[serde(default = "one")]
    pub repetition_factor: usize,
    #[serde(default = "no_attack")]
    pub strategy: StrategySpec,
    #[serde(default)]
    pub channel_depolarize_p: f64,
    #[serde(default)]
    pub angle_distribution: AngleDistribution,
    #[serde(default)]
    pub key_policy: KeyPolicy,
    /// Required after flag overrides; there is no clock-based default.
    #[serde(default)]
    pub master_seed: Option<u64>,
    /// Sessions per pass for the distinguishability estimate. Defaults to
    /// `sessions` clamped to [1000, 100000]; 0 skips the estimate.
    #[serde(default)]
    pub distinguishability_samples: Option<usize>,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default = "one")]
    pub workers: usize,
}

fn one() -> usize {
    1
}

fn no_attack() -> StrategySpec {
    StrategySpec::NoAttack
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

/// The fields that determine results; `out_dir` and `workers` do not.
#[derive(Serialize)]
struct HashedFields<'a> {
    n: usize,
    sessions: u64,
    repetition_factor: usize,
    strategy: &'a StrategySpec,
    channel_depolarize_p: f64,
    angle_distribution: &'a AngleDistribution,
    key_policy: KeyPolicy,
    master_seed: Option<u64>,
    distinguishability_samples: usize,
}

impl ExperimentConfig {
    pub fn new(strategy: StrategySpec, n: usize, sessions: u64, master_seed: u64) -> Self {
        ExperimentConfig {
            n,
            sessions,
            repetition_factor: 1,
            strategy,
            channel_depolarize_p: 0.0,
            angle_distribution: AngleDistribution::ContinuousUniform,
            key_policy: KeyPolicy::Fresh,
            master_seed: Some(master_seed),
            distinguishability_samples: Some(0),
            out_dir: default_out_dir(),
            workers: 1,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn session_config(&self) -> SessionConfig {
        SessionConfig {
            padlocks_per_party: self.n,
            repetition_factor: self.repetition_factor,
            channel_depolarize_p: self.channel_depolarize_p,
            angle_distribution: self.angle_distribution,
        }
    }

    pub fn seed(&self) -> Result<u64> {
        self.master_seed.ok_or_else(|| Error::Config("master_seed must be set in the config or with --seed".into()))
    }

    pub fn ensemble_samples(&self) -> usize {
        self.distinguishability_samples
            .unwrap_or_else(|| usize::try_from(self.sessions).unwrap_or(usize::MAX).clamp(1_000, 100_000))
    }

    pub fn validate(&self) -> Result<()> {
        if self.sessions < 1 {
            return Err(Error::Config("sessions must be at least 1".into()));
        }
        if self.workers < 1 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        self.seed()?;
        self.session_config().validate().map_err(Error::into_config)?;
        if let Some(max) = self.strategy.max_pass() {
            if max > 2 * self.n + 1 {
                return Err(Error::Config(format!(
                    "strategy targets pass {max} but n = {} has only {} passes",
                    self.n,
                    2 * self.n + 1
                )));
            }
        }
        let samples = self.ensemble_samples();
        if samples != 0 && samples < crate::analysis::MIN_ENSEMBLE_SAMPLES {
            return Err(Error::Config(format!(
                "distinguishability_samples must be 0 or at least {}",
                crate::analysis::MIN_ENSEMBLE_SAMPLES
            )));
        }
        self.strategy.build().map(|_| ()).map_err(Error::into_config)
    }

    /// First 16 hex digits of the SHA-256 of the result-determining fields.
    pub fn config_hash(&self) -> String {
        let fields = HashedFields {
            n: self.n,
            sessions: self.sessions,
            repetition_factor: self.repetition_factor,
            strategy: &self.strategy,
            channel_depolarize_p: self.channel_depolarize_p,
            angle_distribution: &self.angle_distribution,
            key_policy: self.key_policy,
            master_seed: self.master_seed,
            distinguishability_samples: self.ensemble_samples(),
        };
        let bytes = serde_json::to_vec(&fields).expect("config fields serialize");
        let digest = Sha256::digest(&bytes);
        hex::encode(&digest[..8])
    }
}

/// A grid of experiments over strategies and padlock counts sharing one
/// base configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(flatten)]
    pub base: ExperimentConfig,
    pub grid: SweepGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    pub strategies: Vec<StrategySpec>,
    #[serde(default = "default_ns")]
    pub n: Vec<usize>,
}

fn default_ns() -> Vec<usize> {
    vec![1]
}

impl SweepConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))
    }

    /// One experiment per (strategy, n) cell, output under
    /// `out_dir/<strategy>_n<n>`.
    pub fn cells(&self) -> Result<Vec<ExperimentConfig>> {
        if self.grid.strategies.is_empty() || self.grid.n.is_empty() {
            return Err(Error::Config("sweep grid is empty".into()));
        }
        let mut cells = Vec::new();
        for strategy in &self.grid.strategies {
            for &n in &self.grid.n {
                let mut cfg = self.base.clone();
                cfg.strategy = strategy.clone();
                cfg.n = n;
                cfg.out_dir = self.base.out_dir.join(format!("{}_n{n}", sanitize(&strategy.label())));
                cfg.validate()?;
                cells.push(cfg);
            }
        }
        Ok(cells)
    }
}

fn sanitize(label: &str) -> String {
    let s: String = label.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    s.trim_end_matches('_').to_string()
}
