use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Map, Value};

use super::strategies::{clone_attack, full_mitm, intercept_resend, NoAttack};
use super::AttackStrategy;
use crate::error::{Error, Result};

pub const KNOWN_STRATEGIES: &[&str] = &["no_attack", "intercept_resend", "clone_attack", "full_mitm"];

/// Measurement basis choice for intercept-resend.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisPolicy {
    Fixed(f64),
    /// Uniform on [0, π), which covers every linear-polarization basis.
    UniformRandom,
}

impl BasisPolicy {
    pub fn validate(&self) -> Result<()> {
        match self {
            BasisPolicy::Fixed(phi) if !phi.is_finite() => {
                Err(Error::Config("fixed basis angle must be finite".into()))
            }
            _ => Ok(()),
        }
    }
}

/// What Eve does with kept clones after the session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CloneMeasurement {
    /// Measure every kept clone in {|0⟩, |1⟩} and take a majority vote.
    Computational,
    /// Keep the clones unmeasured; the guess is a coin flip.
    Defer,
}

/// A strategy selected by name plus parameters. Serialized as
/// `{"name": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq)]
pub enum StrategySpec {
    NoAttack,
    InterceptResend { basis: BasisPolicy, passes: Vec<usize> },
    CloneAttack { passes: Vec<usize>, eve_measurement: CloneMeasurement },
    FullMitm,
}

impl StrategySpec {
    pub fn name(&self) -> &'static str {
        match self {
            StrategySpec::NoAttack => "no_attack",
            StrategySpec::InterceptResend { .. } => "intercept_resend",
            StrategySpec::CloneAttack { .. } => "clone_attack",
            StrategySpec::FullMitm => "full_mitm",
        }
    }

    /// Short human-readable label including parameters, e.g. `clone_attack[1,2,3]`.
    pub fn label(&self) -> String {
        let list = |p: &[usize]| p.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        match self {
            StrategySpec::InterceptResend { passes, .. } => format!("intercept_resend[{}]", list(passes)),
            StrategySpec::CloneAttack { passes, .. } => format!("clone_attack[{}]", list(passes)),
            other => other.name().to_string(),
        }
    }

    pub fn from_name_params(name: &str, params: &Map<String, Value>) -> Result<Self> {
        let passes = |default: Vec<usize>| -> Result<Vec<usize>> {
            match params.get("passes") {
                None => Ok(default),
                Some(v) => serde_json::from_value(v.clone()).map_err(|e| Error::Config(format!("bad `passes`: {e}"))),
            }
        };
        let spec = match name {
            "no_attack" => StrategySpec::NoAttack,
            "full_mitm" => StrategySpec::FullMitm,
            "intercept_resend" => {
                let basis = match params.get("basis") {
                    None => BasisPolicy::UniformRandom,
                    Some(Value::Number(n)) => BasisPolicy::Fixed(n.as_f64().unwrap_or(f64::NAN)),
                    Some(v) => {
                        serde_json::from_value(v.clone()).map_err(|e| Error::Config(format!("bad `basis`: {e}")))?
                    }
                };
                StrategySpec::InterceptResend { basis, passes: passes(vec![1])? }
            }
            "clone_attack" => {
                let eve_measurement = match params.get("eve_measurement") {
                    None => CloneMeasurement::Computational,
                    Some(v) => serde_json::from_value(v.clone())
                        .map_err(|e| Error::Config(format!("bad `eve_measurement`: {e}")))?,
                };
                StrategySpec::CloneAttack { passes: passes(vec![1])?, eve_measurement }
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown strategy `{other}`; known strategies: {}",
                    KNOWN_STRATEGIES.join(", ")
                )))
            }
        };
        let allowed: &[&str] = match &spec {
            StrategySpec::NoAttack | StrategySpec::FullMitm => &[],
            StrategySpec::InterceptResend { .. } => &["basis", "passes"],
            StrategySpec::CloneAttack { .. } => &["passes", "eve_measurement"],
        };
        if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::Config(format!("strategy `{name}` has no parameter `{k}`")));
        }
        spec.build()?;
        Ok(spec)
    }

    pub fn params(&self) -> Map<String, Value> {
        let v = match self {
            StrategySpec::NoAttack | StrategySpec::FullMitm => json!({}),
            StrategySpec::InterceptResend { basis, passes } => json!({ "basis": basis, "passes": passes }),
            StrategySpec::CloneAttack { passes, eve_measurement } => {
                json!({ "passes": passes, "eve_measurement": eve_measurement })
            }
        };
        match v {
            Value::Object(m) => m,
            _ => unreachable!(),
        }
    }

    /// Highest pass index the strategy targets, if any.
    pub fn max_pass(&self) -> Option<usize> {
        match self {
            StrategySpec::InterceptResend { passes, .. } | StrategySpec::CloneAttack { passes, .. } => {
                passes.iter().copied().max()
            }
            _ => None,
        }
    }

    /// Fresh per-session strategy instance.
    pub fn build(&self) -> Result<Box<dyn AttackStrategy>> {
        Ok(match self {
            StrategySpec::NoAttack => Box::new(NoAttack),
            StrategySpec::InterceptResend { basis, passes } => Box::new(intercept_resend(*basis, passes)?),
            StrategySpec::CloneAttack { passes, eve_measurement } => Box::new(clone_attack(passes, *eve_measurement)?),
            StrategySpec::FullMitm => Box::new(full_mitm()),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct NameParams {
    name: String,
    #[serde(default)]
    params: Map<String, Value>,
}

impl Serialize for StrategySpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NameParams { name: self.name().to_string(), params: self.params() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StrategySpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = NameParams::deserialize(d)?;
        StrategySpec::from_name_params(&raw.name, &raw.params).map_err(|e| serde::de::Error::custom(e.detail()))
    }
}
