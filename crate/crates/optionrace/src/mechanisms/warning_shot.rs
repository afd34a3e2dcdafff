//! Comparative statics of an upward revision of the shared-ruin estimate.

use serde::Serialize;

use super::MechanismError;
use crate::model::{
    preemption_threshold, saviour_threshold, survival_threshold, BeliefState, ModelError,
    RaceParameters,
};

/// Trigger movements caused by revising `d_social` from `d_before` up to
/// `d_after`, everything else held fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WarningShotReport {
    pub d_before: f64,
    pub d_after: f64,
    /// Always exactly zero: the shared ruin cancels from the indifference
    /// condition, so no revision of it can move the preemption trigger.
    pub delta_v_preempt: f64,
    /// Positive whenever the revision is strict and ruin is possible.
    pub delta_v_survival: f64,
    /// Nonpositive under a positive belief gap: a bigger feared ruin makes
    /// the believed premium bigger and accelerates the race.
    pub delta_v_saviour: f64,
    /// Change in `v_survival - v_preempt`.
    pub region_width_change: f64,
}

/// Identical triggers report a zero change even when both are infinite.
fn delta(before: f64, after: f64) -> f64 {
    if before == after {
        0.0
    } else {
        after - before
    }
}

/// Evaluates all triggers at the current ruin estimate and at `d_after`,
/// reporting the differences. The revision is a one-shot jump in the
/// posterior mean; no likelihood model is involved.
pub fn warning_shot(
    beliefs: &BeliefState,
    params: &RaceParameters,
    d_after: f64,
) -> Result<WarningShotReport, MechanismError> {
    if !(d_after.is_finite() && d_after >= params.d_social) {
        return Err(ModelError::range("d_after", ">= d_social and finite", d_after).into());
    }
    let after = RaceParameters {
        d_social: d_after,
        ..*params
    };
    let pi = beliefs.pi_self;
    let vp0 = preemption_threshold(pi, params);
    let vp1 = preemption_threshold(pi, &after);
    let vs0 = survival_threshold(pi, params, false)?;
    let vs1 = survival_threshold(pi, &after, false)?;
    let sav0 = saviour_threshold(beliefs, params).value;
    let sav1 = saviour_threshold(beliefs, &after).value;
    Ok(WarningShotReport {
        d_before: params.d_social,
        d_after,
        delta_v_preempt: delta(vp0, vp1),
        delta_v_survival: delta(vs0, vs1),
        delta_v_saviour: delta(sav0, sav1),
        region_width_change: delta(vs0 - vp0, vs1 - vp1),
    })
}
