//! Verified-capability scenario: a leading agent follows its break-even
//! rule while a lagging rival, watching the leader close in on that trigger,
//! deploys prematurely in self-defense.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::barrier::Barrier;
use super::config::{BarrierKind, SimConfig};
use super::path::GbmStepper;
use super::race::{realized_payoffs, run_race, EnsembleStats, RaceOutcome};
use super::SimError;
use crate::model::{safety_probability, BeliefState, ModelError, RaceParameters};

/// One path of the monitored race. Agent 0 is the leader with capability
/// `V_t`; agent 1 trails with capability `V_{t-lag}` (its clock starts after
/// the lag). `breakout` marks a premature deployment by the laggard.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BreakoutOutcome {
    #[serde(flatten)]
    pub outcome: RaceOutcome,
    pub breakout: bool,
    /// Leader's capability at the deployment step.
    pub leader_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakoutReport {
    pub lag: f64,
    pub epsilon: f64,
    /// Lag rounded to whole grid steps.
    pub lag_steps: usize,
    pub stats: EnsembleStats,
    /// Fraction of deployments that were breakouts.
    pub breakout_frequency: Option<f64>,
    /// Same seed and grid, survival barrier, no monitoring.
    pub baseline: EnsembleStats,
    /// Ruin frequency minus the baseline's.
    pub ruin_frequency_delta: Option<f64>,
}

struct BreakoutEvent {
    index: usize,
    breakout: bool,
    /// Deployer's capability at the trigger.
    v_deploy: f64,
    leader_value: f64,
}

fn run_single(
    path: u64,
    config: &SimConfig,
    params: &RaceParameters,
    levels: &[f64],
    log_levels: &[f64],
    lag_steps: usize,
    epsilon: f64,
) -> Result<BreakoutOutcome, SimError> {
    let mut stepper = GbmStepper::new(config, params, path);
    let mut history = Vec::with_capacity(log_levels.len());
    history.push(config.v0.ln());

    let mut event: Option<BreakoutEvent> = None;
    for (i, (&level, &log_level)) in levels.iter().zip(log_levels).enumerate() {
        let log_v = if i == 0 {
            history[0]
        } else {
            let lv = stepper.step_log();
            if !lv.is_finite() {
                return Err(SimError::NonFinite {
                    path,
                    step: i,
                    t: i as f64 * config.dt,
                });
            }
            history.push(lv);
            lv
        };
        // The leader's own break-even rule fires first when the step jumps
        // the whole proximity band.
        if log_v >= log_level {
            let v_deploy = if i == 0 { config.v0 } else { level };
            event = Some(BreakoutEvent {
                index: i,
                breakout: false,
                v_deploy,
                leader_value: log_v.exp(),
            });
            break;
        }
        // Proximity band [level - epsilon, level): the laggard sees the
        // leader closing in and deploys with whatever capability it has.
        if level.is_finite() && log_v.exp() >= level - epsilon {
            let laggard_log = history[i.saturating_sub(lag_steps)];
            let v_deploy = if lag_steps == 0 {
                (level - epsilon).max(0.0)
            } else {
                laggard_log.exp()
            };
            event = Some(BreakoutEvent {
                index: i,
                breakout: true,
                v_deploy,
                leader_value: log_v.exp(),
            });
            break;
        }
    }

    let Some(ev) = event else {
        return Ok(BreakoutOutcome {
            outcome: RaceOutcome::not_deployed(path),
            breakout: false,
            leader_value: None,
        });
    };

    let t = ev.index as f64 * config.dt;
    let pi = safety_probability(params.lambda_rate, t).expect("validated rate");
    let rng = stepper.rng_mut();
    // With no lag the agents are identical and every deployment is a tie;
    // with a lag the event type fixes the deployer and no coin is drawn,
    // keeping the zero-lag draw sequence aligned with the plain race.
    let leader_id: u8 = if lag_steps == 0 {
        if rng.random_bool(0.5) {
            0
        } else {
            1
        }
    } else if ev.breakout {
        1
    } else {
        0
    };
    let aligned = rng.random_bool(pi);
    let (lp, fp) = realized_payoffs(aligned, ev.v_deploy, params);
    let discount = config.discounting.then(|| (-params.r * t).exp());

    Ok(BreakoutOutcome {
        outcome: RaceOutcome {
            path,
            deployed: true,
            t_deploy: Some(t),
            v_deploy: Some(ev.v_deploy),
            pi_at_deploy: Some(pi),
            aligned: Some(aligned),
            leader_id: Some(leader_id),
            follower_id: Some(1 - leader_id),
            leader_payoff: Some(lp),
            follower_payoff: Some(fp),
            leader_payoff_discounted: discount.map(|d| d * lp),
            follower_payoff_discounted: discount.map(|d| d * fp),
        },
        breakout: ev.breakout,
        leader_value: Some(ev.leader_value),
    })
}

/// Plays the monitored race and, for reference, the same seeds under the
/// plain survival rule without monitoring. `lag` is the capability gap in
/// time units; `epsilon` the proximity margin that triggers the breakout.
pub fn breakout_scenario(
    config: &SimConfig,
    params: &RaceParameters,
    lag: f64,
    epsilon: f64,
) -> Result<(BreakoutReport, Vec<BreakoutOutcome>), SimError> {
    params.validate()?;
    config.validate()?;
    if !(lag.is_finite() && lag >= 0.0) {
        return Err(ModelError::range("lag", ">= 0 and finite", lag).into());
    }
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(ModelError::range("epsilon", ">= 0 and finite", epsilon).into());
    }

    let lag_steps = (lag / config.dt).round() as usize;
    let n_steps = config.n_steps();
    // Beliefs do not enter the survival rule; any symmetric pair works.
    let neutral = BeliefState::symmetric(0.0).expect("valid constant");
    let barrier = Barrier::new(BarrierKind::Survival, params, &neutral);
    let levels = barrier.schedule(n_steps, config.dt);
    let log_levels: Vec<f64> = levels.iter().map(|l| l.ln()).collect();

    let outcomes = (0..config.n_paths)
        .into_par_iter()
        .map(|p| run_single(p, config, params, &levels, &log_levels, lag_steps, epsilon))
        .collect::<Result<Vec<_>, _>>()?;

    let records: Vec<RaceOutcome> = outcomes.iter().map(|o| o.outcome).collect();
    let stats = EnsembleStats::aggregate(&records, params);
    let deployed = records.iter().filter(|o| o.deployed).count();
    let breakout_frequency = (deployed > 0).then(|| {
        outcomes.iter().filter(|o| o.breakout).count() as f64 / deployed as f64
    });

    let baseline_config = SimConfig {
        barrier_kind: BarrierKind::Survival,
        ..*config
    };
    let (baseline, _) = run_race(&baseline_config, params, &neutral)?;
    let ruin_frequency_delta = stats
        .ruin_frequency
        .zip(baseline.ruin_frequency)
        .map(|(a, b)| a - b);

    Ok((
        BreakoutReport {
            lag,
            epsilon,
            lag_steps,
            stats,
            breakout_frequency,
            baseline,
            ruin_frequency_delta,
        },
        outcomes,
    ))
}
