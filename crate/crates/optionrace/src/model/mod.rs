//! Closed-form model layer: parameters, beliefs, safety learning, payoffs,
//! deployment thresholds, and region classification.

mod beliefs;
mod params;
mod payoffs;
mod region;
mod safety;
mod thresholds;

pub use beliefs::{BeliefProvenance, BeliefState};
pub use params::RaceParameters;
pub use payoffs::{follower_payoff, leader_payoff, saviour_premium};
pub use region::{classify_region, Region, RegionLabel};
pub use safety::{research_time_for_safety, safety_probability};
pub use thresholds::{
    liability_threshold, nuclear_threshold, preemption_threshold, saviour_threshold,
    suicide_bound_d, survival_threshold, SaviourThreshold, ThresholdSet,
};

use thiserror::Error;

/// Domain violations in the closed-form layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{name} must satisfy {constraint}, got {value}")]
    OutOfRange {
        name: &'static str,
        constraint: &'static str,
        value: f64,
    },
    /// At share = 1 the deployer keeps nothing, so no finite asset value
    /// makes deployment break even.
    #[error("survival threshold undefined at share = 1")]
    DegenerateShare,
    /// At pi = 1 ruin never occurs and no ruin magnitude can be critical.
    #[error("critical ruin magnitude undefined at pi = 1")]
    NoRuinPossible,
}

impl ModelError {
    pub(crate) fn range(name: &'static str, constraint: &'static str, value: f64) -> Self {
        ModelError::OutOfRange {
            name,
            constraint,
            value,
        }
    }
}
