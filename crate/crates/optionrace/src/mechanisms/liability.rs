//! Sizing the deployer-only liability that closes the suicide region.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::bisect::bisect_smallest_nonnegative;
use super::MechanismError;
use crate::model::{liability_threshold, survival_threshold, ModelError, RaceParameters};

/// Which ruin term the survival trigger prices in during the solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurvivalMode {
    /// Survival trigger keeps `d_social` only; the candidate liability moves
    /// the preemption side alone, so the target stays put.
    ExcludesPrivate,
    /// Survival trigger prices the candidate liability too; both triggers
    /// move, the preemption side faster, so a unique crossing still exists
    /// for `share` > 0.
    IncludesPrivate,
}

impl fmt::Display for SurvivalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurvivalMode::ExcludesPrivate => "excludes-private",
            SurvivalMode::IncludesPrivate => "includes-private",
        })
    }
}

/// Both liability answers at one parameter point, kept side by side.
///
/// `d_private_numeric` equalizes the liability-adjusted preemption trigger
/// with the survival trigger under `survival_mode`. `d_private_share_rule`
/// applies the share-scaled rule `S/(1-S) * (invest_cost + (1-pi)*d_social)`
/// instead. The two disagree in general; `discrepancy` carries the absolute
/// difference and no code path drops either answer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiabilitySolution {
    pub d_private_share_rule: f64,
    pub d_private_numeric: f64,
    pub survival_mode: SurvivalMode,
    pub discrepancy: f64,
}

/// Smallest deployer-only liability at which the preemption trigger meets or
/// exceeds the survival trigger, computed by bisection on the trigger gap.
/// Returns 0 when the region is already closed at zero liability (including
/// `share` >= 1/2, where the preemption trigger is infinite). Errors when no
/// liability below 1e12 closes the gap, which happens in includes-private
/// mode at `share` = 0: there both triggers shift at the same rate and the
/// gap never moves.
pub fn critical_private_liability(
    pi: f64,
    params: &RaceParameters,
    mode: SurvivalMode,
) -> Result<LiabilitySolution, MechanismError> {
    if !(pi.is_finite() && pi > 0.0 && pi < 1.0) {
        return Err(ModelError::range("pi", "in (0, 1)", pi).into());
    }
    if params.share >= 1.0 {
        return Err(ModelError::DegenerateShare.into());
    }
    let share_rule = params.share * (params.invest_cost + (1.0 - pi) * params.d_social)
        / (1.0 - params.share);

    let include = mode == SurvivalMode::IncludesPrivate;
    let gap = |d_p: f64| {
        let trial = RaceParameters {
            d_private: d_p,
            ..*params
        };
        let v_s = survival_threshold(pi, &trial, include).expect("share < 1 checked above");
        liability_threshold(pi, &trial) - v_s
    };

    let numeric = if gap(0.0) >= 0.0 {
        0.0
    } else {
        const CEILING: f64 = 1e12;
        let mut hi = 10.0 * params.d_social.max(params.invest_cost);
        while gap(hi) < 0.0 {
            hi *= 10.0;
            if hi > CEILING {
                return Err(MechanismError::RegionNotClosable {
                    mode,
                    searched_to: CEILING,
                });
            }
        }
        bisect_smallest_nonnegative(gap, 0.0, hi)
    };

    Ok(LiabilitySolution {
        d_private_share_rule: share_rule,
        d_private_numeric: numeric,
        survival_mode: mode,
        discrepancy: (numeric - share_rule).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn demo() -> RaceParameters {
        RaceParameters {
            share: 0.25,
            ..RaceParameters::default()
        }
    }

    fn closure_gap(pi: f64, params: &RaceParameters, sol: &LiabilitySolution) -> f64 {
        let closed = RaceParameters {
            d_private: sol.d_private_numeric,
            ..*params
        };
        let include = sol.survival_mode == SurvivalMode::IncludesPrivate;
        liability_threshold(pi, &closed) - survival_threshold(pi, &closed, include).unwrap()
    }

    #[test]
    fn demo_point_excludes_private() {
        // Target trigger 16; (1 + 0.5 d_p)/0.25 = 16 at d_p = 6.
        let sol = critical_private_liability(0.5, &demo(), SurvivalMode::ExcludesPrivate).unwrap();
        assert!((sol.d_private_numeric - 6.0).abs() < 1e-9);
        assert!((sol.d_private_share_rule - 2.0).abs() < 1e-12);
        assert!((sol.discrepancy - 4.0).abs() < 1e-9);
    }

    #[test]
    fn demo_point_includes_private() {
        let sol = critical_private_liability(0.5, &demo(), SurvivalMode::IncludesPrivate).unwrap();
        assert!((sol.d_private_numeric - 18.0).abs() < 1e-9);
        assert!((sol.d_private_share_rule - 2.0).abs() < 1e-12);
    }

    #[test]
    fn solution_closes_the_gap() {
        for mode in [SurvivalMode::ExcludesPrivate, SurvivalMode::IncludesPrivate] {
            let sol = critical_private_liability(0.5, &demo(), mode).unwrap();
            let gap = closure_gap(0.5, &demo(), &sol);
            assert!(gap >= 0.0, "{mode}: trigger must meet or exceed survival");
            assert!(gap.abs() <= 1e-9, "{mode}: gap {gap}");
        }
    }

    #[test]
    fn already_closed_cases_return_zero() {
        // share >= 1/2: preemption trigger infinite for any liability.
        let p = RaceParameters {
            share: 0.5,
            ..RaceParameters::default()
        };
        let sol = critical_private_liability(0.5, &p, SurvivalMode::ExcludesPrivate).unwrap();
        assert_eq!(sol.d_private_numeric, 0.0);

        // No ruin and positive share: survival already sits below preemption.
        let p = RaceParameters {
            share: 0.25,
            d_social: 0.0,
            ..RaceParameters::default()
        };
        let sol = critical_private_liability(0.5, &p, SurvivalMode::ExcludesPrivate).unwrap();
        assert_eq!(sol.d_private_numeric, 0.0);
    }

    #[test]
    fn includes_private_at_zero_share_cannot_close() {
        let p = RaceParameters::default();
        let err = critical_private_liability(0.5, &p, SurvivalMode::IncludesPrivate).unwrap_err();
        assert!(matches!(err, MechanismError::RegionNotClosable { .. }));
    }

    #[test]
    fn rejects_degenerate_probabilities() {
        for pi in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(critical_private_liability(pi, &demo(), SurvivalMode::ExcludesPrivate).is_err());
        }
    }

    // -- Comparative statics of the numeric solution --

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn closure_holds_across_parameter_space(
            pi in 0.05f64..0.95,
            share in 0.01f64..0.49,
            d_social in 0.0f64..50.0,
            invest in 0.1f64..5.0,
        ) {
            let p = RaceParameters {
                share,
                d_social,
                invest_cost: invest,
                ..RaceParameters::default()
            };
            for mode in [SurvivalMode::ExcludesPrivate, SurvivalMode::IncludesPrivate] {
                let sol = critical_private_liability(pi, &p, mode).unwrap();
                if sol.d_private_numeric > 0.0 {
                    let gap = closure_gap(pi, &p, &sol);
                    prop_assert!((0.0..=1e-9).contains(&gap), "{mode}: gap {gap}");
                }
            }
        }

        #[test]
        fn numeric_grows_with_shared_ruin(
            pi in 0.05f64..0.95,
            share in 0.01f64..0.49,
            d_lo in 0.0f64..20.0,
            bump in 0.1f64..20.0,
        ) {
            let base = RaceParameters { share, d_social: d_lo, ..RaceParameters::default() };
            let more = RaceParameters { d_social: d_lo + bump, ..base };
            let a = critical_private_liability(pi, &base, SurvivalMode::ExcludesPrivate).unwrap();
            let b = critical_private_liability(pi, &more, SurvivalMode::ExcludesPrivate).unwrap();
            prop_assert!(b.d_private_numeric >= a.d_private_numeric - 1e-9);
        }

        #[test]
        fn numeric_shrinks_as_share_rises(
            pi in 0.05f64..0.95,
            s_lo in 0.01f64..0.40,
            bump in 0.01f64..0.09,
        ) {
            // A bigger follower share already weakens preemption, so less
            // liability is needed on top of it.
            let base = RaceParameters { share: s_lo, ..RaceParameters::default() };
            let more = RaceParameters { share: s_lo + bump, ..base };
            let a = critical_private_liability(pi, &base, SurvivalMode::ExcludesPrivate).unwrap();
            let b = critical_private_liability(pi, &more, SurvivalMode::ExcludesPrivate).unwrap();
            prop_assert!(b.d_private_numeric <= a.d_private_numeric + 1e-9);
        }
    }
}
