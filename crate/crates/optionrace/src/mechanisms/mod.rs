//! Policy instruments that close or widen the suicide region: privatized
//! liability, windfall sharing, and ruin-estimate revisions.

mod bisect;
mod liability;
mod warning_shot;
mod windfall;

pub use liability::{critical_private_liability, LiabilitySolution, SurvivalMode};
pub use warning_shot::{warning_shot, WarningShotReport};
pub use windfall::critical_windfall_share;

use thiserror::Error;

use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MechanismError {
    #[error(transparent)]
    Model(#[from] ModelError),
    /// The trigger gap never changed sign below the search ceiling; no
    /// finite liability closes the region under this survival mode.
    #[error("region cannot be closed by liability alone ({mode} mode, searched up to {searched_to:.1e})")]
    RegionNotClosable {
        mode: liability::SurvivalMode,
        searched_to: f64,
    },
}
