//! Time-indexed deployment barriers and grid crossing detection.

use crate::model::{
    liability_threshold, preemption_threshold, safety_probability, saviour_threshold,
    survival_threshold, BeliefProvenance, BeliefState, RaceParameters,
};

use super::config::BarrierKind;

/// A deployment rule evaluated along the safety learning curve: at calendar
/// time t the triggers use `pi(t)`. Levels may be infinite (the preemption
/// trigger at t = 0) or zero (a clamped belief-gap trigger), both of which
/// crossing detection handles naturally.
#[derive(Debug, Clone)]
pub struct Barrier {
    kind: BarrierKind,
    params: RaceParameters,
    /// `pi_rival / pi_self`, held fixed as both beliefs ride the curve;
    /// rival belief is clamped into [0, 1].
    rival_ratio: f64,
}

impl Barrier {
    pub fn new(kind: BarrierKind, params: &RaceParameters, beliefs: &BeliefState) -> Self {
        let rival_ratio = if beliefs.pi_self > 0.0 {
            beliefs.pi_rival / beliefs.pi_self
        } else {
            1.0
        };
        Barrier {
            kind,
            params: *params,
            rival_ratio,
        }
    }

    /// Barrier level at calendar time t.
    pub fn level(&self, t: f64) -> f64 {
        if let BarrierKind::Fixed { level } = self.kind {
            return level;
        }
        let pi = safety_probability(self.params.lambda_rate, t).expect("validated rate and time");
        match self.kind {
            BarrierKind::Preemption => preemption_threshold(pi, &self.params),
            // share = 1 leaves the trigger undefined; treat it as uncrossable.
            BarrierKind::Survival => {
                survival_threshold(pi, &self.params, true).unwrap_or(f64::INFINITY)
            }
            BarrierKind::Liability => liability_threshold(pi, &self.params),
            BarrierKind::Saviour => {
                let beliefs = BeliefState {
                    pi_self: pi,
                    pi_rival: (self.rival_ratio * pi).min(1.0),
                    source: BeliefProvenance::Direct,
                };
                saviour_threshold(&beliefs, &self.params).value
            }
            BarrierKind::Fixed { .. } => unreachable!("handled above"),
        }
    }

    /// Levels on the whole grid, shared across paths.
    pub(crate) fn schedule(&self, n_steps: usize, dt: f64) -> Vec<f64> {
        (0..=n_steps).map(|i| self.level(i as f64 * dt)).collect()
    }
}

/// First grid point at or above the barrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub index: usize,
    pub t: f64,
    /// Grid value at detection; overshoots the true touching point by up to
    /// one step's move.
    pub value: f64,
    /// Barrier level at the crossing time.
    pub level: f64,
}

impl Crossing {
    /// Value at which the deployment actually triggers. The continuous path
    /// first touches the barrier at the barrier's own level; the grid value
    /// only records where the path was at the detection step. A path that
    /// starts at or above the barrier deploys with what it has at t = 0.
    pub fn trigger_value(&self) -> f64 {
        if self.index == 0 {
            self.value
        } else {
            self.level
        }
    }
}

/// Earliest grid time with `series[i] >= barrier(i * dt)`; None when the
/// series never reaches the barrier. Crossing an infinite level is
/// impossible; a zero or negative level is crossed immediately.
pub fn first_crossing(series: &[f64], dt: f64, barrier: &Barrier) -> Option<Crossing> {
    for (i, &value) in series.iter().enumerate() {
        let t = i as f64 * dt;
        let level = barrier.level(t);
        if value >= level {
            return Some(Crossing {
                index: i,
                t,
                value,
                level,
            });
        }
    }
    None
}
