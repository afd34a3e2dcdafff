//! Monte Carlo engine: prize paths, time-varying deployment barriers, the
//! simulated race with its alignment lottery, the verified-capability
//! breakout scenario, and first-passage self-certification.
//!
//! Parallelism runs on whatever rayon pool is ambient at the call site.
//! Results never depend on the pool size: paths own their RNG streams and
//! every aggregate is a sequential fold over the ordered per-path records.

mod barrier;
mod breakout;
mod config;
mod path;
mod race;
mod rng;
mod validate;

pub use barrier::{first_crossing, Barrier, Crossing};
pub use breakout::{breakout_scenario, BreakoutOutcome, BreakoutReport};
pub use config::{BarrierKind, SimConfig};
pub use path::simulate_path;
pub use race::{run_race, EnsembleStats, RaceOutcome, TimeQuantiles};
pub use validate::{validate_engine, ValidationReport, VALIDATION_TOLERANCE};

use thiserror::Error;

use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("path {path} produced a non-finite value at step {step} (t = {t})")]
    NonFinite { path: u64, step: usize, t: f64 },
    #[error("first-passage identity needs r > 0 when drift <= 0 (r = {r}, drift = {mu})")]
    IdentityInapplicable { r: f64, mu: f64 },
    #[error("engine validation requires constant volatility, got gamma = {gamma}")]
    StateDependentVol { gamma: f64 },
    #[error("validation barrier {barrier} must sit at or above the start value {v0}")]
    BarrierBelowStart { barrier: f64, v0: f64 },
}
