//! Simulation run settings.

use serde::{Deserialize, Serialize};

use crate::model::ModelError;

/// Which deployment rule the simulated agents follow. All but `Fixed` are
/// time-varying: they re-evaluate their trigger as safety research accrues
/// and `pi(t)` rises.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BarrierKind {
    /// Indifference trigger; infinite at t = 0 where pi(0) = 0.
    Preemption,
    /// Break-even trigger pricing the deployer's full ruin exposure.
    Survival,
    /// Belief-gap trigger; the rival-to-self belief ratio is held fixed as
    /// both beliefs ride the learning curve.
    Saviour,
    /// Indifference trigger with privatized ruin.
    Liability,
    /// Constant level, independent of time and beliefs.
    Fixed { level: f64 },
}

/// Monte Carlo settings: process start, grid, path count, seeding, and the
/// deployment rule under test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub v0: f64,
    pub horizon: f64,
    pub dt: f64,
    pub n_paths: u64,
    pub seed: u64,
    #[serde(rename = "barrier")]
    pub barrier_kind: BarrierKind,
    /// Also report payoffs discounted to t = 0 at rate r.
    pub discounting: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            v0: 1.0,
            horizon: 30.0,
            dt: 1.0 / 252.0,
            n_paths: 10_000,
            seed: 42,
            barrier_kind: BarrierKind::Preemption,
            discounting: false,
        }
    }
}

impl SimConfig {
    /// Steps on the grid; a horizon that is not a step multiple is truncated
    /// to the last full step.
    pub fn n_steps(&self) -> usize {
        (self.horizon / self.dt + 1e-9).floor() as usize
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.v0.is_finite() && self.v0 > 0.0) {
            return Err(ModelError::range("v0", "> 0 and finite", self.v0));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(ModelError::range("horizon", "> 0 and finite", self.horizon));
        }
        if !(self.dt.is_finite() && self.dt > 0.0 && self.dt <= self.horizon) {
            return Err(ModelError::range("dt", "> 0 and <= horizon", self.dt));
        }
        if self.n_paths < 1 {
            return Err(ModelError::range("n_paths", ">= 1", self.n_paths as f64));
        }
        if let BarrierKind::Fixed { level } = self.barrier_kind {
            if !(level.is_finite() && level > 0.0) {
                return Err(ModelError::range("barrier level", "> 0 and finite", level));
            }
        }
        Ok(())
    }
}
