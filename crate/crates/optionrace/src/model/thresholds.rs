//! Critical prize levels at which deployment becomes rational under the
//! different strategic logics.
//!
//! Conventions shared by every function here: a threshold that no finite
//! prize level can satisfy is `f64::INFINITY`, never an error; callers are
//! expected to pass validated parameters and probabilities in [0, 1].

use super::{BeliefState, ModelError, RaceParameters};

/// Prize level at which deploying first and staying out pay the same.
/// The shared-ruin term hits both sides equally and cancels, so the result
/// is independent of `d_social`: fear of mutual ruin does not deter a
/// preemptor. Infinite when `pi` = 0 or `share` >= 1/2 (no first-mover
/// advantage to compete away).
pub fn preemption_threshold(pi: f64, params: &RaceParameters) -> f64 {
    let denom = (1.0 - 2.0 * params.share) * pi;
    if denom <= 0.0 {
        f64::INFINITY
    } else {
        params.invest_cost / denom
    }
}

/// Prize level at which deploying first has nonnegative expected value once
/// the expected ruin is priced in. `include_private` adds the deployer's own
/// liability to the ruin term. Errors at `share` = 1, where the deployer
/// keeps nothing and no finite prize breaks even.
pub fn survival_threshold(
    pi: f64,
    params: &RaceParameters,
    include_private: bool,
) -> Result<f64, ModelError> {
    if params.share >= 1.0 {
        return Err(ModelError::DegenerateShare);
    }
    let d_eff = params.d_social + if include_private { params.d_private } else { 0.0 };
    let denom = (1.0 - params.share) * pi;
    if denom <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((params.invest_cost + (1.0 - pi) * d_eff) / denom)
}

/// First-strike trigger when restraint preserves the status quo instead of
/// ceding the prize: the full expected ruin enters the deployer's own
/// calculus, so the trigger rises with `d_social`. The deterrence branch
/// missing from the preemption logic.
pub fn nuclear_threshold(pi: f64, params: &RaceParameters) -> f64 {
    if pi <= 0.0 {
        return f64::INFINITY;
    }
    (params.invest_cost + (1.0 - pi) * params.d_social) / pi
}

/// Outcome of the belief-gap trigger. When the believed premium covers the
/// whole sunk cost the raw trigger is nonpositive and deployment pays at any
/// prize level; `value` is clamped to zero and `immediate_deploy` set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaviourThreshold {
    pub value: f64,
    pub immediate_deploy: bool,
}

/// Preemption trigger under asymmetric alignment beliefs, winner-takes-all
/// form: `share` is ignored because the underlying indifference argument
/// assumes the follower keeps nothing. A positive belief gap offsets the
/// sunk cost by `d_social * gap`; a negative gap (trusting the rival more)
/// raises the trigger instead. Infinite when `pi_self` = 0.
pub fn saviour_threshold(beliefs: &BeliefState, params: &RaceParameters) -> SaviourThreshold {
    if beliefs.pi_self <= 0.0 {
        return SaviourThreshold {
            value: f64::INFINITY,
            immediate_deploy: false,
        };
    }
    let raw =
        (params.invest_cost - params.d_social * beliefs.belief_gap()) / beliefs.pi_self;
    if raw <= 0.0 {
        SaviourThreshold {
            value: 0.0,
            immediate_deploy: true,
        }
    } else {
        SaviourThreshold {
            value: raw,
            immediate_deploy: false,
        }
    }
}

/// Preemption trigger when part of the ruin is privatized. The shared ruin
/// still cancels between the two sides, but the deployer-only liability does
/// not, so `d_private` deters preemption exactly the way `d_social` cannot.
/// Reduces to [`preemption_threshold`] at `d_private` = 0.
pub fn liability_threshold(pi: f64, params: &RaceParameters) -> f64 {
    let denom = (1.0 - 2.0 * params.share) * pi;
    if denom <= 0.0 {
        f64::INFINITY
    } else {
        (params.invest_cost + (1.0 - pi) * params.d_private) / denom
    }
}

/// Critical shared-ruin magnitude: `(v, pi)` sits in the suicide region
/// exactly when `d_social` exceeds this. Negative means the prize is below
/// the preemption trigger and no ruin magnitude produces the region.
/// Errors at `pi` = 1, where ruin cannot occur.
pub fn suicide_bound_d(v: f64, pi: f64, params: &RaceParameters) -> Result<f64, ModelError> {
    if pi >= 1.0 {
        return Err(ModelError::NoRuinPossible);
    }
    Ok((pi * v * (1.0 - 2.0 * params.share) - params.invest_cost) / (1.0 - pi))
}

/// The five critical prize levels evaluated at one parameter point.
/// Symmetric-game thresholds use the agent's own belief `pi_self`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSet {
    pub v_preempt: f64,
    pub v_survival: f64,
    pub v_nuclear: f64,
    pub v_saviour: f64,
    /// Belief-gap trigger was clamped at zero: deploy at any prize level.
    pub immediate_deploy: bool,
    pub v_liability: f64,
}

impl ThresholdSet {
    pub fn compute(
        beliefs: &BeliefState,
        params: &RaceParameters,
        include_private: bool,
    ) -> Result<Self, ModelError> {
        let pi = beliefs.pi_self;
        let saviour = saviour_threshold(beliefs, params);
        Ok(ThresholdSet {
            v_preempt: preemption_threshold(pi, params),
            v_survival: survival_threshold(pi, params, include_private)?,
            v_nuclear: nuclear_threshold(pi, params),
            v_saviour: saviour.value,
            immediate_deploy: saviour.immediate_deploy,
            v_liability: liability_threshold(pi, params),
        })
    }
}
