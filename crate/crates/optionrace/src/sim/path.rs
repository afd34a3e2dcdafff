//! Log-space path stepping for the prize process.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::config::SimConfig;
use super::rng::path_rng;
use super::SimError;
use crate::model::RaceParameters;

/// One path's state, advanced step by step in log space.
///
/// With constant volatility each step is an exact log-normal increment:
/// `log V += (mu - sigma^2/2) dt + sigma sqrt(dt) z`. With state-dependent
/// volatility (`gamma != 0`) the local `sigma(V) = sigma (V / v_ref)^gamma`
/// is frozen at the step's left endpoint, an Euler scheme. Working in logs
/// keeps the hot loop free of `exp` calls; consumers compare against
/// log-barriers and exponentiate only at a crossing.
pub(crate) struct GbmStepper {
    log_v: f64,
    rng: ChaCha8Rng,
    state_dependent: bool,
    drift_dt: f64,
    vol_sqrt_dt: f64,
    mu: f64,
    sigma: f64,
    gamma: f64,
    log_v_ref: f64,
    dt: f64,
    sqrt_dt: f64,
}

impl GbmStepper {
    pub fn new(config: &SimConfig, params: &RaceParameters, path: u64) -> Self {
        let mu = params.drift();
        GbmStepper {
            log_v: config.v0.ln(),
            rng: path_rng(config.seed, path),
            state_dependent: params.gamma != 0.0,
            drift_dt: (mu - 0.5 * params.sigma * params.sigma) * config.dt,
            vol_sqrt_dt: params.sigma * config.dt.sqrt(),
            mu,
            sigma: params.sigma,
            gamma: params.gamma,
            log_v_ref: params.v_ref.ln(),
            dt: config.dt,
            sqrt_dt: config.dt.sqrt(),
        }
    }

    /// Advances one grid step and returns the new log-value.
    #[inline]
    pub fn step_log(&mut self) -> f64 {
        if self.state_dependent {
            let local = self.sigma * (self.gamma * (self.log_v - self.log_v_ref)).exp();
            let z: f64 = self.rng.sample(StandardNormal);
            self.log_v += (self.mu - 0.5 * local * local) * self.dt + local * self.sqrt_dt * z;
        } else if self.vol_sqrt_dt > 0.0 {
            let z: f64 = self.rng.sample(StandardNormal);
            self.log_v += self.drift_dt + self.vol_sqrt_dt * z;
        } else {
            self.log_v += self.drift_dt;
        }
        self.log_v
    }

    /// The path's RNG, for draws that come after the stepping phase. The
    /// draw order per path is fixed: one normal per step taken, then any
    /// tie-break and lottery draws.
    pub fn rng_mut(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Full value series for one path: `n_steps + 1` points starting at `v0`,
/// index i at time `i * dt`.
pub fn simulate_path(
    config: &SimConfig,
    params: &RaceParameters,
    path_index: u64,
) -> Result<Vec<f64>, SimError> {
    params.validate()?;
    config.validate()?;
    if path_index >= config.n_paths {
        return Err(crate::model::ModelError::range(
            "path_index",
            "< n_paths",
            path_index as f64,
        )
        .into());
    }
    let n_steps = config.n_steps();
    let mut series = Vec::with_capacity(n_steps + 1);
    series.push(config.v0);
    let mut stepper = GbmStepper::new(config, params, path_index);
    for step in 1..=n_steps {
        let log_v = stepper.step_log();
        if !log_v.is_finite() {
            return Err(SimError::NonFinite {
                path: path_index,
                step,
                t: step as f64 * config.dt,
            });
        }
        series.push(log_v.exp());
    }
    Ok(series)
}
