//! Stopped-game payoffs for the deployer and the bystander.

use super::{BeliefState, RaceParameters};

/// Expected payoff of the agent that deploys first at prize level `v` with
/// alignment probability `pi`. The deployer gives up share `S` of the
/// aligned prize, carries the sunk cost, and on misalignment suffers both
/// the shared ruin and any privatized liability.
pub fn leader_payoff(v: f64, pi: f64, params: &RaceParameters) -> f64 {
    (1.0 - params.share) * pi * v
        - (1.0 - pi) * (params.d_social + params.d_private)
        - params.invest_cost
}

/// Expected payoff of the agent that does not deploy: share `S` of the
/// aligned prize, the shared ruin otherwise. No sunk cost, no liability.
pub fn follower_payoff(v: f64, pi: f64, params: &RaceParameters) -> f64 {
    params.share * pi * v - (1.0 - pi) * params.d_social
}

/// Extra deployment incentive from believing one's own alignment odds beat
/// the rival's: the shared ruin weighted by the belief gap. Zero under
/// symmetric beliefs.
pub fn saviour_premium(beliefs: &BeliefState, params: &RaceParameters) -> f64 {
    params.d_social * beliefs.belief_gap()
}
