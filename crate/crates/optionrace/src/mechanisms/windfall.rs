//! Sizing the windfall share that closes the suicide region.

use super::bisect::bisect_smallest_nonnegative;
use super::MechanismError;
use crate::model::{preemption_threshold, survival_threshold, ModelError, RaceParameters};

/// Smallest follower share in [0, 1/2] at which the preemption trigger meets
/// or exceeds the survival trigger, closing the suicide region. Returns 0
/// when the region is already closed at the current share structure; 1/2
/// always suffices because the preemption trigger diverges there.
///
/// The shared-ruin survival trigger is used: a windfall clause redistributes
/// the prize, while deployer liability is a separate instrument and stays out
/// of this solve.
pub fn critical_windfall_share(pi: f64, params: &RaceParameters) -> Result<f64, MechanismError> {
    if !(pi.is_finite() && pi > 0.0 && pi < 1.0) {
        return Err(ModelError::range("pi", "in (0, 1)", pi).into());
    }
    let gap = |s: f64| {
        let trial = RaceParameters { share: s, ..*params };
        let v_s = survival_threshold(pi, &trial, false).expect("share <= 1/2 in solve");
        preemption_threshold(pi, &trial) - v_s
    };
    if gap(0.0) >= 0.0 {
        return Ok(0.0);
    }
    Ok(bisect_smallest_nonnegative(gap, 0.0, 0.5))
}
