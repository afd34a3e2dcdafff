//! The simulated two-player race: paths, crossings, tie-breaks, and the
//! alignment lottery, aggregated into ensemble statistics.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::barrier::Barrier;
use super::config::SimConfig;
use super::path::GbmStepper;
use super::SimError;
use crate::model::{
    follower_payoff, leader_payoff, safety_probability, BeliefState, RaceParameters,
};

/// One simulated path's deployment record. Crossing fields are None when the
/// barrier was never reached before the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RaceOutcome {
    pub path: u64,
    pub deployed: bool,
    pub t_deploy: Option<f64>,
    /// Trigger value: the barrier level at the crossing time (the starting
    /// value for a path that begins above the barrier).
    pub v_deploy: Option<f64>,
    pub pi_at_deploy: Option<f64>,
    pub aligned: Option<bool>,
    pub leader_id: Option<u8>,
    pub follower_id: Option<u8>,
    pub leader_payoff: Option<f64>,
    pub follower_payoff: Option<f64>,
    pub leader_payoff_discounted: Option<f64>,
    pub follower_payoff_discounted: Option<f64>,
}

impl RaceOutcome {
    pub(crate) fn not_deployed(path: u64) -> Self {
        RaceOutcome {
            path,
            deployed: false,
            t_deploy: None,
            v_deploy: None,
            pi_at_deploy: None,
            aligned: None,
            leader_id: None,
            follower_id: None,
            leader_payoff: None,
            follower_payoff: None,
            leader_payoff_discounted: None,
            follower_payoff_discounted: None,
        }
    }
}

/// Realized payoffs given the lottery draw: winners split the prize, losers
/// split the ruin, and only the deployer ever pays the sunk cost or the
/// privatized liability.
pub(crate) fn realized_payoffs(aligned: bool, v: f64, params: &RaceParameters) -> (f64, f64) {
    if aligned {
        (
            (1.0 - params.share) * v - params.invest_cost,
            params.share * v,
        )
    } else {
        (
            -(params.d_social + params.d_private) - params.invest_cost,
            -params.d_social,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeQuantiles {
    pub p10: f64,
    pub p25: f64,
    pub p50: f64,
    pub p75: f64,
    pub p90: f64,
}

/// Ensemble summary. Payoff and timing statistics condition on deployment;
/// `deployment_probability` carries the unconditional rate. Fields are None
/// when no path deployed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnsembleStats {
    pub n_paths: u64,
    pub deployment_probability: f64,
    pub t_deploy_mean: Option<f64>,
    pub t_deploy_quantiles: Option<TimeQuantiles>,
    /// Misalignment frequency among deployed paths.
    pub ruin_frequency: Option<f64>,
    /// Mean of `1 - pi(t_deploy)`: what the ruin frequency should be.
    pub expected_ruin_frequency: Option<f64>,
    /// Standard error of the per-path difference between the ruin indicator
    /// and `1 - pi(t_deploy)`.
    pub ruin_gap_se: Option<f64>,
    pub mean_leader_payoff: Option<f64>,
    pub se_leader_payoff: Option<f64>,
    pub mean_follower_payoff: Option<f64>,
    pub se_follower_payoff: Option<f64>,
    /// Mean absolute gap between the expected leader and follower payoffs
    /// evaluated at the crossing point; near zero on a preemption barrier.
    pub mean_abs_payoff_gap: Option<f64>,
}

fn mean_and_se(xs: &[f64]) -> (Option<f64>, Option<f64>) {
    if xs.is_empty() {
        return (None, None);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (Some(mean), None);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (Some(mean), Some((var / n).sqrt()))
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    let idx = ((sorted.len() - 1) as f64 * p).round() as usize;
    sorted[idx]
}

impl EnsembleStats {
    /// Sequential fold over the ordered outcome records, so the result is
    /// identical however many threads produced them.
    pub fn aggregate(outcomes: &[RaceOutcome], params: &RaceParameters) -> Self {
        let deployed: Vec<&RaceOutcome> = outcomes.iter().filter(|o| o.deployed).collect();
        let n_paths = outcomes.len() as u64;
        let deployment_probability = deployed.len() as f64 / n_paths.max(1) as f64;

        let times: Vec<f64> = deployed.iter().map(|o| o.t_deploy.unwrap()).collect();
        let (t_deploy_mean, _) = mean_and_se(&times);
        let t_deploy_quantiles = if times.is_empty() {
            None
        } else {
            let mut sorted = times.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            Some(TimeQuantiles {
                p10: quantile(&sorted, 0.10),
                p25: quantile(&sorted, 0.25),
                p50: quantile(&sorted, 0.50),
                p75: quantile(&sorted, 0.75),
                p90: quantile(&sorted, 0.90),
            })
        };

        let ruins: Vec<f64> = deployed
            .iter()
            .map(|o| if o.aligned.unwrap() { 0.0 } else { 1.0 })
            .collect();
        let expected: Vec<f64> = deployed.iter().map(|o| 1.0 - o.pi_at_deploy.unwrap()).collect();
        let gaps: Vec<f64> = ruins.iter().zip(&expected).map(|(r, e)| r - e).collect();
        let (ruin_frequency, _) = mean_and_se(&ruins);
        let (expected_ruin_frequency, _) = mean_and_se(&expected);
        let (_, ruin_gap_se) = mean_and_se(&gaps);

        let leader: Vec<f64> = deployed.iter().map(|o| o.leader_payoff.unwrap()).collect();
        let follower: Vec<f64> = deployed.iter().map(|o| o.follower_payoff.unwrap()).collect();
        let (mean_leader_payoff, se_leader_payoff) = mean_and_se(&leader);
        let (mean_follower_payoff, se_follower_payoff) = mean_and_se(&follower);

        let payoff_gaps: Vec<f64> = deployed
            .iter()
            .map(|o| {
                let v = o.v_deploy.unwrap();
                let pi = o.pi_at_deploy.unwrap();
                (leader_payoff(v, pi, params) - follower_payoff(v, pi, params)).abs()
            })
            .collect();
        let (mean_abs_payoff_gap, _) = mean_and_se(&payoff_gaps);

        EnsembleStats {
            n_paths,
            deployment_probability,
            t_deploy_mean,
            t_deploy_quantiles,
            ruin_frequency,
            expected_ruin_frequency,
            ruin_gap_se,
            mean_leader_payoff,
            se_leader_payoff,
            mean_follower_payoff,
            se_follower_payoff,
            mean_abs_payoff_gap,
        }
    }
}

fn run_single(
    path: u64,
    config: &SimConfig,
    params: &RaceParameters,
    log_levels: &[f64],
    levels: &[f64],
) -> Result<RaceOutcome, SimError> {
    let mut stepper = GbmStepper::new(config, params, path);
    let log_v0 = config.v0.ln();

    let crossed = if log_v0 >= log_levels[0] {
        Some((0usize, log_v0))
    } else {
        let mut hit = None;
        for (i, &log_level) in log_levels.iter().enumerate().skip(1) {
            let log_v = stepper.step_log();
            if !log_v.is_finite() {
                return Err(SimError::NonFinite {
                    path,
                    step: i,
                    t: i as f64 * config.dt,
                });
            }
            if log_v >= log_level {
                hit = Some((i, log_v));
                break;
            }
        }
        hit
    };

    let Some((index, _log_v)) = crossed else {
        return Ok(RaceOutcome::not_deployed(path));
    };

    let t = index as f64 * config.dt;
    let pi = safety_probability(params.lambda_rate, t).expect("validated rate");
    let rng = stepper.rng_mut();
    // Symmetric game: both agents are ready at the same instant, so every
    // deployment is a tie, resolved by the path's own coin.
    let leader_id: u8 = if rng.random_bool(0.5) { 0 } else { 1 };
    let aligned = rng.random_bool(pi);
    let v_deploy = if index == 0 { config.v0 } else { levels[index] };
    let (lp, fp) = realized_payoffs(aligned, v_deploy, params);
    let discount = config.discounting.then(|| (-params.r * t).exp());

    Ok(RaceOutcome {
        path,
        deployed: true,
        t_deploy: Some(t),
        v_deploy: Some(v_deploy),
        pi_at_deploy: Some(pi),
        aligned: Some(aligned),
        leader_id: Some(leader_id),
        follower_id: Some(1 - leader_id),
        leader_payoff: Some(lp),
        follower_payoff: Some(fp),
        leader_payoff_discounted: discount.map(|d| d * lp),
        follower_payoff_discounted: discount.map(|d| d * fp),
    })
}

/// Simulates every path against the configured barrier and aggregates. The
/// outcome vector is ordered by path index; statistics are folded from it
/// sequentially, so results do not depend on thread count.
pub fn run_race(
    config: &SimConfig,
    params: &RaceParameters,
    beliefs: &BeliefState,
) -> Result<(EnsembleStats, Vec<RaceOutcome>), SimError> {
    params.validate()?;
    config.validate()?;
    let n_steps = config.n_steps();
    let barrier = Barrier::new(config.barrier_kind, params, beliefs);
    let levels = barrier.schedule(n_steps, config.dt);
    let log_levels: Vec<f64> = levels.iter().map(|l| l.ln()).collect();

    let outcomes = (0..config.n_paths)
        .into_par_iter()
        .map(|p| run_single(p, config, params, &log_levels, &levels))
        .collect::<Result<Vec<_>, _>>()?;
    let stats = EnsembleStats::aggregate(&outcomes, params);
    Ok((stats, outcomes))
}
