//! Safety learning curve mapping research time to alignment probability.

use super::ModelError;

/// Probability that a system deployed after `tau` units of safety research
/// turns out aligned: `1 - exp(-lambda * tau)`. Starts at zero, approaches
/// one, never reaches it.
pub fn safety_probability(lambda_rate: f64, tau: f64) -> Result<f64, ModelError> {
    if !(lambda_rate.is_finite() && lambda_rate > 0.0) {
        return Err(ModelError::range("lambda_rate", "> 0 and finite", lambda_rate));
    }
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(ModelError::range("tau", ">= 0 and finite", tau));
    }
    Ok(1.0 - (-lambda_rate * tau).exp())
}

/// Research time required to reach alignment probability `pi`; exact inverse
/// of [`safety_probability`]. Only `pi < 1` is reachable in finite time.
pub fn research_time_for_safety(lambda_rate: f64, pi: f64) -> Result<f64, ModelError> {
    if !(lambda_rate.is_finite() && lambda_rate > 0.0) {
        return Err(ModelError::range("lambda_rate", "> 0 and finite", lambda_rate));
    }
    if !(pi.is_finite() && (0.0..1.0).contains(&pi)) {
        return Err(ModelError::range("pi", "in [0, 1)", pi));
    }
    Ok(-(1.0 - pi).ln() / lambda_rate)
}
