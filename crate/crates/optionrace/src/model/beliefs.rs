//! Alignment beliefs held by one agent about itself and its rival.

use serde::{Deserialize, Serialize};

use super::safety::safety_probability;
use super::ModelError;

/// How a belief pair was produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BeliefProvenance {
    /// Probabilities supplied directly.
    Direct,
    /// Both probabilities read off the learning curve at research time `tau`.
    Learned { lambda: f64, tau: f64 },
}

/// The pair `(pi_self, pi_rival)` plus where it came from. Asymmetric pairs
/// drive the belief-gap threshold; everything else uses `pi_self`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeliefState {
    pub pi_self: f64,
    pub pi_rival: f64,
    pub source: BeliefProvenance,
}

fn check_pi(name: &'static str, pi: f64) -> Result<(), ModelError> {
    if pi.is_finite() && (0.0..=1.0).contains(&pi) {
        Ok(())
    } else {
        Err(ModelError::range(name, "in [0, 1]", pi))
    }
}

impl BeliefState {
    pub fn direct(pi_self: f64, pi_rival: f64) -> Result<Self, ModelError> {
        check_pi("pi_self", pi_self)?;
        check_pi("pi_rival", pi_rival)?;
        Ok(BeliefState {
            pi_self,
            pi_rival,
            source: BeliefProvenance::Direct,
        })
    }

    /// Shared belief: both agents assign the same probability.
    pub fn symmetric(pi: f64) -> Result<Self, ModelError> {
        Self::direct(pi, pi)
    }

    /// Symmetric beliefs implied by `tau` units of safety research at rate
    /// `lambda`.
    pub fn learned(lambda: f64, tau: f64) -> Result<Self, ModelError> {
        let pi = safety_probability(lambda, tau)?;
        Ok(BeliefState {
            pi_self: pi,
            pi_rival: pi,
            source: BeliefProvenance::Learned { lambda, tau },
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.pi_self == self.pi_rival
    }

    /// `pi_self - pi_rival`; positive when the agent trusts its own safety
    /// work more than the rival's.
    pub fn belief_gap(&self) -> f64 {
        self.pi_self - self.pi_rival
    }
}
