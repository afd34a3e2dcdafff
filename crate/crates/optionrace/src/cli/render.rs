//! Artifact shapes and writers. File schemas are pinned here, separate from
//! the library structs, so internal renames never silently change emitted
//! bytes; every float goes through the portable formatter.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::portable::{fmt_f64, opt, Num};
use crate::mechanisms::{LiabilitySolution, SurvivalMode, WarningShotReport};
use crate::model::{Region, RegionLabel, ThresholdSet};
use crate::sim::{
    BarrierKind, BreakoutOutcome, BreakoutReport, EnsembleStats, RaceOutcome, TimeQuantiles,
    ValidationReport,
};

#[derive(Debug, Serialize)]
pub struct ThresholdsArtifact {
    pub include_private: bool,
    pub v_preempt: Num,
    pub v_survival: Num,
    pub v_nuclear: Num,
    pub v_saviour: Num,
    pub immediate_deploy: bool,
    pub v_liability: Num,
}

impl ThresholdsArtifact {
    pub fn new(t: &ThresholdSet, include_private: bool) -> Self {
        ThresholdsArtifact {
            include_private,
            v_preempt: Num(t.v_preempt),
            v_survival: Num(t.v_survival),
            v_nuclear: Num(t.v_nuclear),
            v_saviour: Num(t.v_saviour),
            immediate_deploy: t.immediate_deploy,
            v_liability: Num(t.v_liability),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RegionArtifact {
    pub value: Num,
    pub pi: Num,
    pub include_private: bool,
    pub region: Region,
    pub v_preempt: Num,
    pub v_survival: Num,
}

impl RegionArtifact {
    pub fn new(value: f64, pi: f64, include_private: bool, label: &RegionLabel) -> Self {
        RegionArtifact {
            value: Num(value),
            pi: Num(pi),
            include_private,
            region: label.region,
            v_preempt: Num(label.v_preempt),
            v_survival: Num(label.v_survival),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct LiabilityModeArtifact {
    pub survival_mode: SurvivalMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_private_share_rule: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_private_numeric: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl LiabilityModeArtifact {
    pub fn solved(s: &LiabilitySolution) -> Self {
        LiabilityModeArtifact {
            survival_mode: s.survival_mode,
            d_private_share_rule: Some(Num(s.d_private_share_rule)),
            d_private_numeric: Some(Num(s.d_private_numeric)),
            discrepancy: Some(Num(s.discrepancy)),
            error: None,
        }
    }

    pub fn failed(mode: SurvivalMode, error: String) -> Self {
        LiabilityModeArtifact {
            survival_mode: mode,
            d_private_share_rule: None,
            d_private_numeric: None,
            discrepancy: None,
            error: Some(error),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct LiabilityArtifact {
    pub modes: Vec<LiabilityModeArtifact>,
}

#[derive(Debug, Serialize)]
pub struct WindfallArtifact {
    pub critical_share: Num,
}

#[derive(Debug, Serialize)]
pub struct WarningShotArtifact {
    pub d_before: Num,
    pub d_after: Num,
    pub delta_v_preempt: Num,
    pub delta_v_survival: Num,
    pub delta_v_saviour: Num,
    pub region_width_change: Num,
}

impl From<&WarningShotReport> for WarningShotArtifact {
    fn from(r: &WarningShotReport) -> Self {
        WarningShotArtifact {
            d_before: Num(r.d_before),
            d_after: Num(r.d_after),
            delta_v_preempt: Num(r.delta_v_preempt),
            delta_v_survival: Num(r.delta_v_survival),
            delta_v_saviour: Num(r.delta_v_saviour),
            region_width_change: Num(r.region_width_change),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct QuantilesArtifact {
    pub p10: Num,
    pub p25: Num,
    pub p50: Num,
    pub p75: Num,
    pub p90: Num,
}

impl From<&TimeQuantiles> for QuantilesArtifact {
    fn from(q: &TimeQuantiles) -> Self {
        QuantilesArtifact {
            p10: Num(q.p10),
            p25: Num(q.p25),
            p50: Num(q.p50),
            p75: Num(q.p75),
            p90: Num(q.p90),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct StatsArtifact {
    pub n_paths: u64,
    pub deployment_probability: Num,
    pub t_deploy_mean: Option<Num>,
    pub t_deploy_quantiles: Option<QuantilesArtifact>,
    pub ruin_frequency: Option<Num>,
    pub expected_ruin_frequency: Option<Num>,
    pub ruin_gap_se: Option<Num>,
    pub mean_leader_payoff: Option<Num>,
    pub se_leader_payoff: Option<Num>,
    pub mean_follower_payoff: Option<Num>,
    pub se_follower_payoff: Option<Num>,
    pub mean_abs_payoff_gap: Option<Num>,
}

impl From<&EnsembleStats> for StatsArtifact {
    fn from(s: &EnsembleStats) -> Self {
        StatsArtifact {
            n_paths: s.n_paths,
            deployment_probability: Num(s.deployment_probability),
            t_deploy_mean: opt(s.t_deploy_mean),
            t_deploy_quantiles: s.t_deploy_quantiles.as_ref().map(QuantilesArtifact::from),
            ruin_frequency: opt(s.ruin_frequency),
            expected_ruin_frequency: opt(s.expected_ruin_frequency),
            ruin_gap_se: opt(s.ruin_gap_se),
            mean_leader_payoff: opt(s.mean_leader_payoff),
            se_leader_payoff: opt(s.se_leader_payoff),
            mean_follower_payoff: opt(s.mean_follower_payoff),
            se_follower_payoff: opt(s.se_follower_payoff),
            mean_abs_payoff_gap: opt(s.mean_abs_payoff_gap),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RaceArtifact {
    pub seed: u64,
    pub barrier: BarrierKind,
    pub stats: StatsArtifact,
}

#[derive(Debug, Serialize)]
pub struct BreakoutArtifact {
    pub seed: u64,
    pub lag: Num,
    pub epsilon: Num,
    pub lag_steps: u64,
    pub stats: StatsArtifact,
    pub breakout_frequency: Option<Num>,
    pub baseline: StatsArtifact,
    pub ruin_frequency_delta: Option<Num>,
}

impl BreakoutArtifact {
    pub fn new(seed: u64, r: &BreakoutReport) -> Self {
        BreakoutArtifact {
            seed,
            lag: Num(r.lag),
            epsilon: Num(r.epsilon),
            lag_steps: r.lag_steps as u64,
            stats: StatsArtifact::from(&r.stats),
            breakout_frequency: opt(r.breakout_frequency),
            baseline: StatsArtifact::from(&r.baseline),
            ruin_frequency_delta: opt(r.ruin_frequency_delta),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ValidateArtifact {
    pub seed: u64,
    pub n_paths: u64,
    pub barrier_level: Num,
    pub beta1: Num,
    pub target: Num,
    pub estimate: Num,
    pub standard_error: Num,
    pub rel_error: Num,
    pub truncation_discount: Num,
    pub tolerance: Num,
    pub within_tolerance: bool,
}

impl ValidateArtifact {
    pub fn new(seed: u64, tolerance: f64, r: &ValidationReport) -> Self {
        ValidateArtifact {
            seed,
            n_paths: r.n_paths,
            barrier_level: Num(r.barrier_level),
            beta1: Num(r.beta1),
            target: Num(r.target),
            estimate: Num(r.estimate),
            standard_error: Num(r.standard_error),
            rel_error: Num(r.rel_error),
            truncation_discount: Num(r.truncation_discount),
            tolerance: Num(tolerance),
            within_tolerance: r.within_tolerance,
        }
    }
}

fn cell_opt_f64(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn cell_opt_bool(b: Option<bool>) -> String {
    b.map(|b| b.to_string()).unwrap_or_default()
}

fn cell_opt_u8(n: Option<u8>) -> String {
    n.map(|n| n.to_string()).unwrap_or_default()
}

const RACE_COLUMNS: &str = "path,deployed,t_deploy,v_deploy,pi_at_deploy,aligned,\
leader_id,follower_id,leader_payoff,follower_payoff,\
leader_payoff_discounted,follower_payoff_discounted";

fn race_row(out: &mut String, o: &RaceOutcome) {
    out.push_str(&format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}\n",
        o.path,
        o.deployed,
        cell_opt_f64(o.t_deploy),
        cell_opt_f64(o.v_deploy),
        cell_opt_f64(o.pi_at_deploy),
        cell_opt_bool(o.aligned),
        cell_opt_u8(o.leader_id),
        cell_opt_u8(o.follower_id),
        cell_opt_f64(o.leader_payoff),
        cell_opt_f64(o.follower_payoff),
        cell_opt_f64(o.leader_payoff_discounted),
        cell_opt_f64(o.follower_payoff_discounted),
    ));
}

/// One row per path; empty cells where the path never deployed.
pub fn race_csv(outcomes: &[RaceOutcome]) -> String {
    let mut out = String::with_capacity(outcomes.len() * 64);
    out.push_str(RACE_COLUMNS);
    out.push('\n');
    for o in outcomes {
        race_row(&mut out, o);
    }
    out
}

pub fn breakout_csv(outcomes: &[BreakoutOutcome]) -> String {
    let mut out = String::with_capacity(outcomes.len() * 64);
    out.push_str(RACE_COLUMNS);
    out.push_str(",breakout,leader_value\n");
    for o in outcomes {
        let mut row = String::new();
        race_row(&mut row, &o.outcome);
        row.pop();
        out.push_str(&row);
        out.push_str(&format!(",{},{}\n", o.breakout, cell_opt_f64(o.leader_value)));
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<(), String> {
    let mut f =
        fs::File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?;
    f.write_all(text.as_bytes())
        .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| format!("cannot serialize {}: {e}", path.display()))?;
    text.push('\n');
    write_text(path, &text)
}
