//! Deployment thresholds, suicide-region analysis, and Monte Carlo race
//! simulation for a two-player technology race with shared ruin.
//!
//! Two agents watch a stochastic prize `V` and decide when to deploy a
//! technology that pays off with probability `pi` and destroys value
//! `d_social` for everyone (plus `d_private` for the deployer) otherwise.
//! Waiting buys safety: `pi` rises with research time. The closed-form layer
//! in [`model`] locates the critical prize levels and the suicide region
//! between them, [`mechanisms`] sizes policy interventions that move those
//! levels, and [`sim`] plays the race out path by path.

pub mod cli;
pub mod mechanisms;
pub mod model;
pub mod sim;

pub use mechanisms::MechanismError;
pub use model::ModelError;
pub use sim::SimError;
