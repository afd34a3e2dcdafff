//! Command bodies: compute, print a short table, write the artifacts the
//! requested formats ask for. Result files are written only after all
//! computation for the command has finished.

use std::path::Path;

use super::config::RunConfig;
use super::portable::{fmt_f64, Num};
use super::render::{
    self, BreakoutArtifact, LiabilityArtifact, LiabilityModeArtifact, RaceArtifact,
    RegionArtifact, StatsArtifact, ThresholdsArtifact, ValidateArtifact, WarningShotArtifact,
    WindfallArtifact,
};
use super::sweep;
use super::{CliError, OutputPlan};
use crate::mechanisms::{
    critical_private_liability, critical_windfall_share, warning_shot, MechanismError,
    SurvivalMode,
};
use crate::model::{classify_region, Region, ThresholdSet};
use crate::sim::{
    breakout_scenario, run_race, validate_engine, BarrierKind, EnsembleStats,
    VALIDATION_TOLERANCE,
};

fn kv(name: &str, value: &str) {
    println!("  {name:<24} {value}");
}

fn opt_s(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_else(|| "-".to_string())
}

fn wrote(path: &Path) {
    println!("Wrote: {}", path.display());
}

fn barrier_label(kind: &BarrierKind) -> String {
    match kind {
        BarrierKind::Preemption => "preemption".to_string(),
        BarrierKind::Survival => "survival".to_string(),
        BarrierKind::Saviour => "saviour".to_string(),
        BarrierKind::Liability => "liability".to_string(),
        BarrierKind::Fixed { level } => format!("fixed({})", fmt_f64(*level)),
    }
}

pub fn thresholds(config: &RunConfig, plan: &OutputPlan) -> Result<(), CliError> {
    let beliefs = config.beliefs.to_state()?;
    let t = ThresholdSet::compute(&beliefs, &config.params, config.include_private)?;
    println!(
        "thresholds | pi_self={} pi_rival={} share={} d_social={} d_private={} include_private={}",
        fmt_f64(beliefs.pi_self),
        fmt_f64(beliefs.pi_rival),
        fmt_f64(config.params.share),
        fmt_f64(config.params.d_social),
        fmt_f64(config.params.d_private),
        config.include_private
    );
    kv("v_preempt", &fmt_f64(t.v_preempt));
    kv("v_survival", &fmt_f64(t.v_survival));
    kv("v_nuclear", &fmt_f64(t.v_nuclear));
    let saviour = if t.immediate_deploy {
        format!("{} (immediate deploy)", fmt_f64(t.v_saviour))
    } else {
        fmt_f64(t.v_saviour)
    };
    kv("v_saviour", &saviour);
    kv("v_liability", &fmt_f64(t.v_liability));
    if plan.formats.json {
        let path = plan.out_dir.join("thresholds.json");
        render::write_json(&path, &ThresholdsArtifact::new(&t, config.include_private))
            .map_err(CliError::Config)?;
        wrote(&path);
    }
    Ok(())
}

pub fn classify(config: &RunConfig, plan: &OutputPlan) -> Result<(), CliError> {
    let beliefs = config.beliefs.to_state()?;
    let label = classify_region(
        config.value,
        beliefs.pi_self,
        &config.params,
        config.include_private,
    )?;
    println!(
        "classify | value={} pi={} include_private={}",
        fmt_f64(config.value),
        fmt_f64(beliefs.pi_self),
        config.include_private
    );
    kv("region", label.region.as_str());
    kv("v_preempt", &fmt_f64(label.v_preempt));
    kv("v_survival", &fmt_f64(label.v_survival));
    if plan.formats.json {
        let path = plan.out_dir.join("region.json");
        let artifact =
            RegionArtifact::new(config.value, beliefs.pi_self, config.include_private, &label);
        render::write_json(&path, &artifact).map_err(CliError::Config)?;
        wrote(&path);
    }
    Ok(())
}

pub fn sweep_cmd(config: &RunConfig, plan: &OutputPlan) -> Result<(), CliError> {
    let grid = sweep::build_grid(config).map_err(CliError::Config)?;
    println!(
        "sweep | x={} [{}, {}] x{} y={} [{}, {}] x{}",
        grid.x.name,
        fmt_f64(grid.x.min),
        fmt_f64(grid.x.max),
        grid.x.steps,
        grid.y.name,
        fmt_f64(grid.y.min),
        fmt_f64(grid.y.max),
        grid.y.steps
    );
    let suicide = grid
        .cells
        .iter()
        .filter(|c| c.region == Region::SuicideRegion)
        .count();
    kv("cells", &grid.cells.len().to_string());
    kv("suicide_cells", &suicide.to_string());
    if plan.formats.csv {
        let path = plan.out_dir.join("sweep.csv");
        render::write_text(&path, &sweep::sweep_csv(&grid)).map_err(CliError::Config)?;
        wrote(&path);
    }
    if plan.formats.svg {
        let path = plan.out_dir.join("sweep.svg");
        render::write_text(&path, &sweep::sweep_svg(&grid)).map_err(CliError::Config)?;
        wrote(&path);
    }
    Ok(())
}

fn print_stats(stats: &EnsembleStats) {
    kv(
        "deployment_probability",
        &fmt_f64(stats.deployment_probability),
    );
    kv("t_deploy mean", &opt_s(stats.t_deploy_mean));
    if let Some(q) = &stats.t_deploy_quantiles {
        kv(
            "t_deploy p10/p50/p90",
            &format!("{} / {} / {}", fmt_f64(q.p10), fmt_f64(q.p50), fmt_f64(q.p90)),
        );
    }
    kv("ruin_frequency", &opt_s(stats.ruin_frequency));
    kv(
        "expected_ruin_frequency",
        &opt_s(stats.expected_ruin_frequency),
    );
    kv(
        "leader_payoff",
        &format!(
            "mean={} se={}",
            opt_s(stats.mean_leader_payoff),
            opt_s(stats.se_leader_payoff)
        ),
    );
    kv(
        "follower_payoff",
        &format!(
            "mean={} se={}",
            opt_s(stats.mean_follower_payoff),
            opt_s(stats.se_follower_payoff)
        ),
    );
    kv("mean_abs_payoff_gap", &opt_s(stats.mean_abs_payoff_gap));
}

pub fn simulate_race(config: &RunConfig, plan: &OutputPlan) -> Result<(), CliError> {
    let beliefs = config.beliefs.to_state()?;
    let (stats, outcomes) = run_race(&config.sim, &config.params, &beliefs)?;
    println!(
        "simulate race | seed={} paths={} barrier={} dt={} horizon={}",
        config.sim.seed,
        config.sim.n_paths,
        barrier_label(&config.sim.barrier_kind),
        fmt_f64(config.sim.dt),
        fmt_f64(config.sim.horizon)
    );
    print_stats(&stats);
    if plan.formats.json {
        let path = plan.out_dir.join("race.json");
        let artifact = RaceArtifact {
            seed: config.sim.seed,
            barrier: config.sim.barrier_kind,
            stats: StatsArtifact::from(&stats),
        };
        render::write_json(&path, &artifact).map_err(CliError::Config)?;
        wrote(&path);
    }
    if plan.formats.csv {
        let path = plan.out_dir.join("race_paths.csv");
        render::write_text(&path, &render::race_csv(&outcomes)).map_err(CliError::Config)?;
        wrote(&path);
    }
    Ok(())
}

pub fn simulate_breakout(config: &RunConfig, plan: &OutputPlan) -> Result<(), CliError> {
    let (report, outcomes) = breakout_scenario(
        &config.sim,
        &config.params,
        config.breakout.lag,
        config.breakout.epsilon,
    )?;
    println!(
        "simulate breakout | seed={} paths={} lag={} ({} steps) epsilon={}",
        config.sim.seed,
        config.sim.n_paths,
        fmt_f64(report.lag),
        report.lag_steps,
        fmt_f64(report.epsilon)
    );
    print_stats(&report.stats);
    kv("breakout_frequency", &opt_s(report.breakout_frequency));
    kv(
        "baseline ruin_frequency",
        &opt_s(report.baseline.ruin_frequency),
    );
    kv("ruin_frequency_delta", &opt_s(report.ruin_frequency_delta));
    if plan.formats.json {
        let path = plan.out_dir.join("breakout.json");
        render::write_json(&path, &BreakoutArtifact::new(config.sim.seed, &report))
            .map_err(CliError::Config)?;
        wrote(&path);
    }
    if plan.formats.csv {
        let path = plan.out_dir.join("breakout_paths.csv");
        render::write_text(&path, &render::breakout_csv(&outcomes)).map_err(CliError::Config)?;
        wrote(&path);
    }
    Ok(())
}

pub fn simulate_validate(config: &RunConfig, plan: &OutputPlan) -> Result<(), CliError> {
    let level = match config.sim.barrier_kind {
        BarrierKind::Fixed { level } => level,
        ref other => {
            return Err(CliError::Config(format!(
                "simulate validate needs a fixed barrier level; pass --barrier LEVEL \
                 (a number), got {}",
                barrier_label(other)
            )))
        }
    };
    let report = validate_engine(&config.sim, &config.params, level)?;
    println!(
        "simulate validate | seed={} paths={} level={} dt={}",
        config.sim.seed,
        config.sim.n_paths,
        fmt_f64(level),
        fmt_f64(config.sim.dt)
    );
    kv("beta1", &fmt_f64(report.beta1));
    kv("target", &fmt_f64(report.target));
    kv("estimate", &fmt_f64(report.estimate));
    kv("standard_error", &fmt_f64(report.standard_error));
    kv("rel_error", &fmt_f64(report.rel_error));
    kv("truncation_discount", &fmt_f64(report.truncation_discount));
    kv("within_tolerance", &report.within_tolerance.to_string());
    if plan.formats.json {
        let path = plan.out_dir.join("validate.json");
        let artifact = ValidateArtifact::new(config.sim.seed, VALIDATION_TOLERANCE, &report);
        render::write_json(&path, &artifact).map_err(CliError::Config)?;
        wrote(&path);
    }
    if !report.within_tolerance {
        return Err(CliError::Numerical(format!(
            "validation estimate off by {} relative, tolerance {}",
            fmt_f64(report.rel_error),
            fmt_f64(VALIDATION_TOLERANCE)
        )));
    }
    Ok(())
}

pub fn mechanism_liability(config: &RunConfig, plan: &OutputPlan) -> Result<(), CliError> {
    let pi = config.beliefs.pi_self;
    println!(
        "mechanism liability | pi={} share={} d_social={} invest_cost={}",
        fmt_f64(pi),
        fmt_f64(config.params.share),
        fmt_f64(config.params.d_social),
        fmt_f64(config.params.invest_cost)
    );
    let mut modes = Vec::new();
    let mut solved_any = false;
    for mode in [SurvivalMode::ExcludesPrivate, SurvivalMode::IncludesPrivate] {
        match critical_private_liability(pi, &config.params, mode) {
            Ok(s) => {
                solved_any = true;
                kv(
                    &mode.to_string(),
                    &format!(
                        "numeric={} share_rule={} discrepancy={}",
                        fmt_f64(s.d_private_numeric),
                        fmt_f64(s.d_private_share_rule),
                        fmt_f64(s.discrepancy)
                    ),
                );
                modes.push(LiabilityModeArtifact::solved(&s));
            }
            Err(MechanismError::Model(e)) => return Err(CliError::Config(e.to_string())),
            Err(e @ MechanismError::RegionNotClosable { .. }) => {
                kv(&mode.to_string(), &format!("unsolved: {e}"));
                modes.push(LiabilityModeArtifact::failed(mode, e.to_string()));
            }
        }
    }
    if plan.formats.json {
        let path = plan.out_dir.join("liability.json");
        render::write_json(&path, &LiabilityArtifact { modes }).map_err(CliError::Config)?;
        wrote(&path);
    }
    if !solved_any {
        return Err(CliError::Numerical(
            "no survival mode admits a closing liability below the search bound".to_string(),
        ));
    }
    Ok(())
}

pub fn mechanism_windfall(config: &RunConfig, plan: &OutputPlan) -> Result<(), CliError> {
    let pi = config.beliefs.pi_self;
    let share = critical_windfall_share(pi, &config.params)?;
    println!(
        "mechanism windfall | pi={} d_social={} invest_cost={}",
        fmt_f64(pi),
        fmt_f64(config.params.d_social),
        fmt_f64(config.params.invest_cost)
    );
    kv("critical_share", &fmt_f64(share));
    if plan.formats.json {
        let path = plan.out_dir.join("windfall.json");
        render::write_json(
            &path,
            &WindfallArtifact {
                critical_share: Num(share),
            },
        )
        .map_err(CliError::Config)?;
        wrote(&path);
    }
    Ok(())
}

pub fn mechanism_warning_shot(config: &RunConfig, plan: &OutputPlan) -> Result<(), CliError> {
    let beliefs = config.beliefs.to_state()?;
    let report = warning_shot(&beliefs, &config.params, config.mechanism.d_after)?;
    println!(
        "mechanism warning-shot | d_social {} -> {} pi_self={} pi_rival={}",
        fmt_f64(report.d_before),
        fmt_f64(report.d_after),
        fmt_f64(beliefs.pi_self),
        fmt_f64(beliefs.pi_rival)
    );
    kv("delta_v_preempt", &fmt_f64(report.delta_v_preempt));
    kv("delta_v_survival", &fmt_f64(report.delta_v_survival));
    kv("delta_v_saviour", &fmt_f64(report.delta_v_saviour));
    kv("region_width_change", &fmt_f64(report.region_width_change));
    if plan.formats.json {
        let path = plan.out_dir.join("warning_shot.json");
        render::write_json(&path, &WarningShotArtifact::from(&report))
            .map_err(CliError::Config)?;
        wrote(&path);
    }
    Ok(())
}
