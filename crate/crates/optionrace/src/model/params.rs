//! Exogenous constants of the race.

use serde::{Deserialize, Serialize};

use super::ModelError;

/// Everything outside the state variables: discounting, process parameters,
/// costs, ruin magnitudes, market share, and the safety learning rate.
///
/// The risk-neutral drift is always `r - delta`; it is computed on demand and
/// never stored, so the two rates cannot drift out of sync.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RaceParameters {
    /// Risk-free discount rate, per unit time.
    pub r: f64,
    /// Opportunity cost of delay (dividend-style leakage), per unit time.
    pub delta: f64,
    /// Base volatility of the prize process. Zero degenerates to the
    /// deterministic drift-only process.
    pub sigma: f64,
    /// Exponent of state-dependent volatility `sigma * (v / v_ref)^gamma`;
    /// zero keeps volatility constant.
    pub gamma: f64,
    /// Reference prize level anchoring state-dependent volatility.
    pub v_ref: f64,
    /// Sunk cost of deployment.
    pub invest_cost: f64,
    /// Ruin magnitude borne by everyone when a deployed system misaligns.
    pub d_social: f64,
    /// Additional ruin borne by the deployer alone (liability regimes).
    pub d_private: f64,
    /// Market share kept by the non-deployer, in [0, 1].
    pub share: f64,
    /// Rate at which alignment confidence accumulates with research time.
    pub lambda_rate: f64,
}

impl Default for RaceParameters {
    fn default() -> Self {
        RaceParameters {
            r: 0.05,
            delta: 0.02,
            sigma: 0.3,
            gamma: 0.0,
            v_ref: 1.0,
            invest_cost: 1.0,
            d_social: 10.0,
            d_private: 0.0,
            share: 0.0,
            lambda_rate: 0.5,
        }
    }
}

impl RaceParameters {
    /// Risk-neutral drift `r - delta`.
    pub fn drift(&self) -> f64 {
        self.r - self.delta
    }

    /// Checks every field against its admissible range.
    pub fn validate(&self) -> Result<(), ModelError> {
        let checks: [(&'static str, f64, &'static str, bool); 10] = [
            ("r", self.r, ">= 0 and finite", self.r.is_finite() && self.r >= 0.0),
            (
                "delta",
                self.delta,
                ">= 0 and finite",
                self.delta.is_finite() && self.delta >= 0.0,
            ),
            (
                "sigma",
                self.sigma,
                ">= 0 and finite",
                self.sigma.is_finite() && self.sigma >= 0.0,
            ),
            ("gamma", self.gamma, "finite", self.gamma.is_finite()),
            (
                "v_ref",
                self.v_ref,
                "> 0 and finite",
                self.v_ref.is_finite() && self.v_ref > 0.0,
            ),
            (
                "invest_cost",
                self.invest_cost,
                "> 0 and finite",
                self.invest_cost.is_finite() && self.invest_cost > 0.0,
            ),
            (
                "d_social",
                self.d_social,
                ">= 0 and finite",
                self.d_social.is_finite() && self.d_social >= 0.0,
            ),
            (
                "d_private",
                self.d_private,
                ">= 0 and finite",
                self.d_private.is_finite() && self.d_private >= 0.0,
            ),
            (
                "share",
                self.share,
                "in [0, 1]",
                self.share.is_finite() && (0.0..=1.0).contains(&self.share),
            ),
            (
                "lambda_rate",
                self.lambda_rate,
                "> 0 and finite",
                self.lambda_rate.is_finite() && self.lambda_rate > 0.0,
            ),
        ];
        for (name, value, constraint, ok) in checks {
            if !ok {
                return Err(ModelError::range(name, constraint, value));
            }
        }
        Ok(())
    }
}
