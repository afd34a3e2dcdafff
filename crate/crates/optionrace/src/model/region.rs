//! Strategic classification of a `(prize, belief)` point.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::thresholds::{preemption_threshold, survival_threshold};
use super::{ModelError, RaceParameters};

/// Where `(v, pi)` sits relative to the preemption and survival triggers.
///
/// `SuicideRegion` is the band where competitive pressure forces deployment
/// (`v` at or past the preemption trigger) even though deploying has negative
/// expected value (`v` still below the survival trigger).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// Below both triggers: everyone waits.
    WaitBelowAll,
    /// Preemption binds, survival does not: the race destroys value.
    SuicideRegion,
    /// Deploying would pay, but nobody is forced to move yet.
    ProfitableWait,
    /// Past both triggers: the race is on and deployment has positive value.
    RaceViable,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::WaitBelowAll => "wait_below_all",
            Region::SuicideRegion => "suicide_region",
            Region::ProfitableWait => "profitable_wait",
            Region::RaceViable => "race_viable",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classification plus the two boundary values it was judged against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionLabel {
    pub region: Region,
    pub v_preempt: f64,
    pub v_survival: f64,
}

/// Classifies `(v, pi)` against the two triggers. Boundaries follow the
/// half-open convention: a point exactly on a trigger belongs to the region
/// above it.
pub fn classify_region(
    v: f64,
    pi: f64,
    params: &RaceParameters,
    include_private: bool,
) -> Result<RegionLabel, ModelError> {
    if !(v.is_finite() && v >= 0.0) {
        return Err(ModelError::range("v", ">= 0 and finite", v));
    }
    if !(pi.is_finite() && (0.0..=1.0).contains(&pi)) {
        return Err(ModelError::range("pi", "in [0, 1]", pi));
    }
    let v_preempt = preemption_threshold(pi, params);
    let v_survival = survival_threshold(pi, params, include_private)?;
    let region = match (v >= v_preempt, v >= v_survival) {
        (true, true) => Region::RaceViable,
        (true, false) => Region::SuicideRegion,
        (false, true) => Region::ProfitableWait,
        (false, false) => Region::WaitBelowAll,
    };
    Ok(RegionLabel {
        region,
        v_preempt,
        v_survival,
    })
}
