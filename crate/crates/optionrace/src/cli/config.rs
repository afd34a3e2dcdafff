//! Run configuration: one JSON document with flag overrides layered on top.
//!
//! Sources merge in a fixed order: built-in defaults, then a named preset,
//! then a config file, then `--set`-style edits in command-line order. All
//! layers edit the same JSON tree and the merged tree is parsed and
//! validated once, so a typo is caught the same way wherever it came from.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::model::{BeliefState, ModelError, RaceParameters};
use crate::sim::SimConfig;

pub const PRESETS: &[(&str, &str)] = &[
    ("baseline", include_str!("../../presets/baseline.json")),
    ("figure1", include_str!("../../presets/figure1.json")),
    ("liability-demo", include_str!("../../presets/liability-demo.json")),
    ("expert-survey", include_str!("../../presets/expert-survey.json")),
];

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

/// The belief pair as configured. Kept flat here so config files stay short;
/// conversion into a [`BeliefState`] revalidates the probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BeliefConfig {
    pub pi_self: f64,
    pub pi_rival: f64,
}

impl Default for BeliefConfig {
    fn default() -> Self {
        BeliefConfig {
            pi_self: 0.5,
            pi_rival: 0.5,
        }
    }
}

impl BeliefConfig {
    pub fn to_state(self) -> Result<BeliefState, ModelError> {
        BeliefState::direct(self.pi_self, self.pi_rival)
    }
}

/// Parameter names a sweep axis may vary.
pub const AXIS_NAMES: &[&str] = &[
    "r",
    "delta",
    "sigma",
    "gamma",
    "v_ref",
    "invest_cost",
    "d_social",
    "d_private",
    "share",
    "lambda_rate",
    "pi",
    "pi_self",
    "pi_rival",
    "value",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: u32,
}

impl SweepAxis {
    pub fn validate(&self) -> Result<(), String> {
        if !AXIS_NAMES.contains(&self.name.as_str()) {
            return Err(format!(
                "unknown sweep axis {:?}; axes vary one of: {}",
                self.name,
                AXIS_NAMES.join(", ")
            ));
        }
        if self.steps < 2 {
            return Err(format!("sweep axis {:?} needs steps >= 2", self.name));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(format!(
                "sweep axis {:?} needs finite min < max, got [{}, {}]",
                self.name, self.min, self.max
            ));
        }
        Ok(())
    }

    /// Inclusive evenly spaced grid with exact endpoints.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps as usize;
        (0..n)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub x: SweepAxis,
    pub y: SweepAxis,
    /// Point marked on the phase diagram, in (x, y) data units.
    pub annotate: Option<[f64; 2]>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            x: SweepAxis {
                name: "d_social".to_string(),
                min: 0.0,
                max: 10.0,
                steps: 41,
            },
            y: SweepAxis {
                name: "value".to_string(),
                min: 0.0,
                max: 15.0,
                steps: 61,
            },
            annotate: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MechanismConfig {
    /// Revised shared-ruin estimate for the warning-shot report.
    pub d_after: f64,
}

impl Default for MechanismConfig {
    fn default() -> Self {
        MechanismConfig { d_after: 50.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BreakoutConfig {
    /// Capability lag of the trailing agent, in time units. Zero keeps the
    /// agents symmetric, so shrinking epsilon to zero recovers the plain
    /// survival race draw for draw.
    pub lag: f64,
    /// Detection band width below the survival trigger.
    pub epsilon: f64,
}

impl Default for BreakoutConfig {
    fn default() -> Self {
        BreakoutConfig {
            lag: 0.0,
            epsilon: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub params: RaceParameters,
    pub beliefs: BeliefConfig,
    /// Prize level used by `classify` and by sweeps that do not vary it.
    pub value: f64,
    /// Price the deployer-only liability into the survival trigger.
    pub include_private: bool,
    pub sim: SimConfig,
    pub sweep: SweepConfig,
    pub mechanism: MechanismConfig,
    pub breakout: BreakoutConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: RaceParameters::default(),
            beliefs: BeliefConfig::default(),
            value: 4.0,
            include_private: false,
            sim: SimConfig::default(),
            sweep: SweepConfig::default(),
            mechanism: MechanismConfig::default(),
            breakout: BreakoutConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        self.params.validate().map_err(|e| e.to_string())?;
        self.beliefs.to_state().map_err(|e| e.to_string())?;
        if !(self.value.is_finite() && self.value >= 0.0) {
            return Err(format!("value must be >= 0 and finite, got {}", self.value));
        }
        self.sim.validate().map_err(|e| e.to_string())?;
        self.sweep.x.validate()?;
        self.sweep.y.validate()?;
        if self.sweep.x.name == self.sweep.y.name {
            return Err(format!("sweep axes both vary {:?}", self.sweep.x.name));
        }
        if !(self.breakout.lag.is_finite() && self.breakout.lag >= 0.0) {
            return Err(format!("breakout.lag must be >= 0, got {}", self.breakout.lag));
        }
        if !(self.breakout.epsilon.is_finite() && self.breakout.epsilon >= 0.0) {
            return Err(format!(
                "breakout.epsilon must be >= 0, got {}",
                self.breakout.epsilon
            ));
        }
        Ok(())
    }
}

/// Writes one axis coordinate into the per-cell evaluation state.
pub fn apply_axis(
    name: &str,
    t: f64,
    params: &mut RaceParameters,
    beliefs: &mut BeliefConfig,
    value: &mut f64,
) {
    match name {
        "r" => params.r = t,
        "delta" => params.delta = t,
        "sigma" => params.sigma = t,
        "gamma" => params.gamma = t,
        "v_ref" => params.v_ref = t,
        "invest_cost" => params.invest_cost = t,
        "d_social" => params.d_social = t,
        "d_private" => params.d_private = t,
        "share" => params.share = t,
        "lambda_rate" => params.lambda_rate = t,
        "pi" => {
            beliefs.pi_self = t;
            beliefs.pi_rival = t;
        }
        "pi_self" => beliefs.pi_self = t,
        "pi_rival" => beliefs.pi_rival = t,
        "value" => *value = t,
        _ => unreachable!("axis names are validated before use"),
    }
}

/// Accumulates the configuration layers as one JSON tree. The tree starts
/// from the serialized defaults, so a partial override of a nested object
/// (say `sweep.y.steps`) edits that one field and leaves its siblings alone.
pub struct ConfigBuilder {
    doc: Value,
}

impl Default for ConfigBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl ConfigBuilder {
    pub fn new() -> Self {
        ConfigBuilder {
            doc: serde_json::to_value(RunConfig::default()).expect("defaults serialize"),
        }
    }

    pub fn preset(&mut self, name: &str) -> Result<(), String> {
        let text = PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| *t)
            .ok_or_else(|| {
                format!(
                    "unknown preset {:?}; one of: {}",
                    name,
                    preset_names().join(", ")
                )
            })?;
        merge(&mut self.doc, serde_json::from_str(text).expect("embedded preset parses"));
        Ok(())
    }

    pub fn file(&mut self, path: &Path) -> Result<(), String> {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let v: Value =
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        merge(&mut self.doc, v);
        Ok(())
    }

    /// One `key=value` edit addressed by dotted path into the JSON tree.
    pub fn set(&mut self, entry: &str) -> Result<(), String> {
        let (path, raw) = entry
            .split_once('=')
            .ok_or_else(|| format!("--set wants KEY=VALUE, got {entry:?}"))?;
        self.set_path(path, parse_literal(raw))
    }

    pub fn set_path(&mut self, path: &str, value: Value) -> Result<(), String> {
        let mut slot = &mut self.doc;
        for key in path.split('.') {
            if key.is_empty() {
                return Err(format!("empty key segment in {path:?}"));
            }
            if !slot.is_object() {
                *slot = Value::Object(Default::default());
            }
            slot = slot
                .as_object_mut()
                .expect("made an object above")
                .entry(key)
                .or_insert(Value::Null);
        }
        *slot = value;
        Ok(())
    }

    pub fn finish(self) -> Result<RunConfig, String> {
        let config: RunConfig =
            serde_json::from_value(self.doc).map_err(|e| format!("config: {e}"))?;
        config.validate()?;
        Ok(config)
    }
}

fn merge(base: &mut Value, over: Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                merge(b.entry(k).or_insert(Value::Null), v);
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Values that parse as JSON are taken structurally, so numbers, booleans,
/// and objects all work; anything else is a bare string.
fn parse_literal(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::BarrierKind;

    #[test]
    fn defaults_validate_and_round_trip() {
        let config = RunConfig::default();
        config.validate().unwrap();
        let json = serde_json::to_string(&config).unwrap();
        let back: RunConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, config);
    }

    #[test]
    fn empty_document_is_the_default() {
        let config = ConfigBuilder::new().finish().unwrap();
        assert_eq!(config, RunConfig::default());
    }

    #[test]
    fn every_preset_parses_and_validates() {
        for (name, _) in PRESETS {
            let mut b = ConfigBuilder::new();
            b.preset(name).unwrap();
            b.finish().unwrap_or_else(|e| panic!("preset {name}: {e}"));
        }
    }

    #[test]
    fn sets_override_presets() {
        let mut b = ConfigBuilder::new();
        b.preset("baseline").unwrap();
        b.set("params.d_social=3.5").unwrap();
        b.set("sim.n_paths=64").unwrap();
        b.set("sim.barrier=survival").unwrap();
        b.set("include_private=true").unwrap();
        let config = b.finish().unwrap();
        assert_eq!(config.params.d_social, 3.5);
        assert_eq!(config.sim.n_paths, 64);
        assert_eq!(config.sim.barrier_kind, BarrierKind::Survival);
        assert!(config.include_private);
    }

    #[test]
    fn structured_set_values_parse() {
        let mut b = ConfigBuilder::new();
        b.set("sim.barrier={\"fixed\":{\"level\":2.0}}").unwrap();
        let config = b.finish().unwrap();
        assert_eq!(config.sim.barrier_kind, BarrierKind::Fixed { level: 2.0 });
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut b = ConfigBuilder::new();
        b.set("params.dsocial=3.5").unwrap();
        assert!(b.finish().is_err());
    }

    #[test]
    fn set_without_equals_is_rejected() {
        let mut b = ConfigBuilder::new();
        assert!(b.set("params.r").is_err());
    }

    #[test]
    fn axis_validation() {
        let ok = SweepAxis {
            name: "share".to_string(),
            min: 0.0,
            max: 0.4,
            steps: 5,
        };
        ok.validate().unwrap();
        assert_eq!(ok.grid().len(), 5);
        assert_eq!(ok.grid()[0], 0.0);
        assert_eq!(ok.grid()[4], 0.4);

        let bad_name = SweepAxis { name: "v_preempt".to_string(), ..ok.clone() };
        assert!(bad_name.validate().is_err());
        let bad_steps = SweepAxis { steps: 1, ..ok.clone() };
        assert!(bad_steps.validate().is_err());
        let bad_range = SweepAxis { min: 1.0, max: 1.0, ..ok };
        assert!(bad_range.validate().is_err());
    }

    #[test]
    fn duplicate_axes_are_rejected() {
        let mut b = ConfigBuilder::new();
        b.set("sweep.y.name=d_social").unwrap();
        b.set("sweep.y.min=0").unwrap();
        b.set("sweep.y.max=5").unwrap();
        assert!(b.finish().unwrap_err().contains("both vary"));
    }

    #[test]
    fn axis_application_touches_the_right_field() {
        let mut params = RaceParameters::default();
        let mut beliefs = BeliefConfig::default();
        let mut value = 4.0;
        apply_axis("share", 0.25, &mut params, &mut beliefs, &mut value);
        apply_axis("pi", 0.8, &mut params, &mut beliefs, &mut value);
        apply_axis("value", 9.0, &mut params, &mut beliefs, &mut value);
        assert_eq!(params.share, 0.25);
        assert_eq!((beliefs.pi_self, beliefs.pi_rival), (0.8, 0.8));
        assert_eq!(value, 9.0);
    }
}
