//! Command-line front end. Hand-rolled argument parsing, JSON config with
//! flag overrides, and deterministic artifact output. Every run writes
//! `config_resolved.json` so it can be reproduced from the output directory
//! alone.

mod commands;
mod config;
mod portable;
mod render;
mod svg;
mod sweep;

use std::path::{Path, PathBuf};

use serde_json::json;

use crate::mechanisms::MechanismError;
use crate::model::ModelError;
use crate::sim::SimError;

pub use config::{ConfigBuilder, RunConfig};

/// Failures are split by exit code: configuration and usage problems exit 1,
/// numerical and solver failures exit 2.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<MechanismError> for CliError {
    fn from(e: MechanismError) -> Self {
        match e {
            MechanismError::Model(m) => CliError::Config(m.to_string()),
            e @ MechanismError::RegionNotClosable { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Model(m) => CliError::Config(m.to_string()),
            e @ (SimError::StateDependentVol { .. } | SimError::BarrierBelowStart { .. }) => {
                CliError::Config(e.to_string())
            }
            e @ (SimError::NonFinite { .. } | SimError::IdentityInapplicable { .. }) => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Formats {
            csv: true,
            json: true,
            svg: true,
        }
    }
}

impl Formats {
    fn parse(s: &str) -> Result<Self, CliError> {
        let mut f = Formats {
            csv: false,
            json: false,
            svg: false,
        };
        for part in s.split(',') {
            match part.trim() {
                "csv" => f.csv = true,
                "json" => f.json = true,
                "svg" => f.svg = true,
                other => {
                    return Err(CliError::Config(format!(
                        "unknown format {other:?}; pick from csv,json,svg"
                    )))
                }
            }
        }
        Ok(f)
    }
}

#[derive(Debug)]
pub struct OutputPlan {
    pub out_dir: PathBuf,
    pub formats: Formats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    Thresholds,
    Classify,
    Sweep,
    SimulateRace,
    SimulateBreakout,
    SimulateValidate,
    MechanismLiability,
    MechanismWindfall,
    MechanismWarningShot,
}

struct Invocation {
    command: Command,
    config: RunConfig,
    plan: OutputPlan,
}

/// Shorthand flags that expand to `--set` paths on the config document.
/// `--pi` sets both belief fields so a symmetric race stays symmetric.
const ALIASES: &[(&str, &[&str])] = &[
    ("--pi", &["beliefs.pi_self", "beliefs.pi_rival"]),
    ("--pi-self", &["beliefs.pi_self"]),
    ("--pi-rival", &["beliefs.pi_rival"]),
    ("--value", &["value"]),
    ("--share", &["params.share"]),
    ("--invest-cost", &["params.invest_cost"]),
    ("--d-social", &["params.d_social"]),
    ("--d-private", &["params.d_private"]),
    ("--sigma", &["params.sigma"]),
    ("--lambda", &["params.lambda_rate"]),
    ("--v0", &["sim.v0"]),
    ("--horizon", &["sim.horizon"]),
    ("--dt", &["sim.dt"]),
    ("--paths", &["sim.n_paths"]),
    ("--seed", &["sim.seed"]),
    ("--lag", &["breakout.lag"]),
    ("--epsilon", &["breakout.epsilon"]),
    ("--d-after", &["mechanism.d_after"]),
];

fn usage() -> &'static str {
    "optionrace: thresholds, deployment regions, and race simulation for a \
     preemption game with endogenous ruin risk

USAGE:
    optionrace <COMMAND> [FLAGS]

COMMANDS:
    thresholds                  print the threshold ladder for one parameter point
    classify                    place a (value, pi) point into a deployment region
    sweep                       grid the region map over two axes (csv + svg)
    simulate race               Monte Carlo first-passage race at a barrier
    simulate breakout           race where the follower can redeploy after a lag
    simulate validate           check the engine against a closed-form hit probability
    mechanism liability         critical private liability closing the suicide region
    mechanism windfall          critical windfall share closing the suicide region
    mechanism warning-shot      threshold shifts after a public damage revision

FLAGS:
    --config FILE          load a JSON config (same shape as config_resolved.json)
    --preset NAME          start from a named preset: baseline | figure1 |
                           liability-demo | expert-survey
    --set KEY=VALUE        override one config field by dotted path,
                           e.g. --set params.d_social=25 --set sim.barrier=survival
    --out DIR              output directory (default: out)
    --format LIST          comma list of csv,json,svg (default: all three)
    --seed N               simulation seed (same as --set sim.seed=N)
    --barrier B            barrier rule for simulate: preemption | survival |
                           saviour | liability, or a number for a fixed level
    --pi P                 set both belief fields; --pi-self / --pi-rival set one
    --value V  --share S  --invest-cost I  --d-social D  --d-private D
    --sigma S  --lambda L  --v0 V  --horizon T  --dt DT  --paths N
    --lag T  --epsilon E  --d-after D
                           shorthands for the matching --set path
    -h, --help             print this text

Precedence: defaults, then --preset, then --config, then --set and shorthand
flags in command-line order.

ENVIRONMENT:
    OPTIONRACE_THREADS     worker thread count for simulation (speed only;
                           output bytes do not depend on it)

EXIT CODES:
    0  success (for simulate validate: estimate within tolerance)
    1  usage or configuration error
    2  numerical or solver failure (including a failed validation)

Every run writes config_resolved.json to the output directory; feeding it
back with --config reproduces the run exactly."
}

/// `--flag=value` becomes two tokens so the main loop only sees one shape.
fn normalize(args: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    for a in args {
        if a.starts_with("--") {
            if let Some((flag, value)) = a.split_once('=') {
                out.push(flag.to_string());
                out.push(value.to_string());
                continue;
            }
        }
        out.push(a.clone());
    }
    out
}

enum SetOp {
    Entry(String),
    Value(String, serde_json::Value),
}

fn parse(args: &[String]) -> Result<Invocation, CliError> {
    let toks = normalize(args);
    let mut i = 0;

    let word = toks
        .first()
        .ok_or_else(|| CliError::Config("missing command; see --help".to_string()))?;
    if word.starts_with("--") {
        return Err(CliError::Config(format!(
            "expected a command before {word}; see --help"
        )));
    }
    i += 1;
    let mut variant = |options: &[(&str, Command)]| -> Result<Command, CliError> {
        let names = options
            .iter()
            .map(|(n, _)| *n)
            .collect::<Vec<_>>()
            .join(" | ");
        let sub = toks
            .get(i)
            .filter(|s| !s.starts_with("--"))
            .ok_or_else(|| CliError::Config(format!("{word} needs a variant: {names}")))?;
        i += 1;
        options
            .iter()
            .find(|(n, _)| n == sub)
            .map(|(_, c)| *c)
            .ok_or_else(|| {
                CliError::Config(format!("unknown {word} variant {sub:?}; expected {names}"))
            })
    };
    let command = match word.as_str() {
        "thresholds" => Command::Thresholds,
        "classify" => Command::Classify,
        "sweep" => Command::Sweep,
        "simulate" => variant(&[
            ("race", Command::SimulateRace),
            ("breakout", Command::SimulateBreakout),
            ("validate", Command::SimulateValidate),
        ])?,
        "mechanism" => variant(&[
            ("liability", Command::MechanismLiability),
            ("windfall", Command::MechanismWindfall),
            ("warning-shot", Command::MechanismWarningShot),
        ])?,
        other => {
            return Err(CliError::Config(format!(
                "unknown command {other:?}; see --help"
            )))
        }
    };

    let mut preset: Option<String> = None;
    let mut config_file: Option<String> = None;
    let mut ops: Vec<SetOp> = Vec::new();
    let mut out_dir = PathBuf::from("out");
    let mut formats = Formats::default();

    while i < toks.len() {
        let flag = toks[i].clone();
        i += 1;
        let mut need = |what: &str| -> Result<String, CliError> {
            let v = toks
                .get(i)
                .ok_or_else(|| CliError::Config(format!("{flag} needs {what}")))?;
            i += 1;
            Ok(v.clone())
        };
        match flag.as_str() {
            "--config" => {
                let v = need("a file path")?;
                if config_file.replace(v).is_some() {
                    return Err(CliError::Config("--config given twice".to_string()));
                }
            }
            "--preset" => {
                let v = need("a preset name")?;
                if preset.replace(v).is_some() {
                    return Err(CliError::Config("--preset given twice".to_string()));
                }
            }
            "--set" => ops.push(SetOp::Entry(need("KEY=VALUE")?)),
            "--out" => out_dir = PathBuf::from(need("a directory")?),
            "--format" => formats = Formats::parse(&need("a comma list")?)?,
            "--barrier" => {
                let raw = need("a barrier name or level")?;
                match serde_json::from_str::<f64>(&raw) {
                    Ok(level) => ops.push(SetOp::Value(
                        "sim.barrier".to_string(),
                        json!({ "fixed": { "level": level } }),
                    )),
                    Err(_) => ops.push(SetOp::Value("sim.barrier".to_string(), json!(raw))),
                }
            }
            _ => {
                if let Some((_, paths)) = ALIASES.iter().find(|(name, _)| *name == flag) {
                    let raw = need("a value")?;
                    for path in *paths {
                        ops.push(SetOp::Entry(format!("{path}={raw}")));
                    }
                } else {
                    return Err(CliError::Config(format!(
                        "unknown flag {flag}; see --help"
                    )));
                }
            }
        }
    }

    let mut builder = ConfigBuilder::new();
    if let Some(name) = &preset {
        builder.preset(name).map_err(CliError::Config)?;
    }
    if let Some(path) = &config_file {
        builder.file(Path::new(path)).map_err(CliError::Config)?;
    }
    for op in &ops {
        match op {
            SetOp::Entry(entry) => builder.set(entry).map_err(CliError::Config)?,
            SetOp::Value(path, value) => builder
                .set_path(path, value.clone())
                .map_err(CliError::Config)?,
        }
    }
    let config = builder.finish().map_err(CliError::Config)?;

    Ok(Invocation {
        command,
        config,
        plan: OutputPlan { out_dir, formats },
    })
}

/// Worker pool from OPTIONRACE_THREADS. None means the ambient default pool.
fn pool_from_env() -> Result<Option<rayon::ThreadPool>, CliError> {
    let raw = match std::env::var("OPTIONRACE_THREADS") {
        Ok(v) => v,
        Err(_) => return Ok(None),
    };
    let n: usize = raw.parse().map_err(|_| {
        CliError::Config(format!(
            "OPTIONRACE_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    if n == 0 {
        return Err(CliError::Config(
            "OPTIONRACE_THREADS must be a positive integer, got 0".to_string(),
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::Config(format!("cannot build thread pool: {e}")))?;
    Ok(Some(pool))
}

fn execute(inv: &Invocation) -> Result<(), CliError> {
    std::fs::create_dir_all(&inv.plan.out_dir).map_err(|e| {
        CliError::Config(format!(
            "cannot create {}: {e}",
            inv.plan.out_dir.display()
        ))
    })?;
    // Written before the command runs so a failed run still records its input.
    // Full precision, no significant-digit rounding: feeding the file back via
    // --config must reproduce the run bit for bit.
    let resolved = inv.plan.out_dir.join("config_resolved.json");
    render::write_json(&resolved, &inv.config).map_err(CliError::Config)?;
    println!("Wrote: {}", resolved.display());

    match inv.command {
        Command::Thresholds => commands::thresholds(&inv.config, &inv.plan),
        Command::Classify => commands::classify(&inv.config, &inv.plan),
        Command::Sweep => commands::sweep_cmd(&inv.config, &inv.plan),
        Command::SimulateRace => commands::simulate_race(&inv.config, &inv.plan),
        Command::SimulateBreakout => commands::simulate_breakout(&inv.config, &inv.plan),
        Command::SimulateValidate => commands::simulate_validate(&inv.config, &inv.plan),
        Command::MechanismLiability => commands::mechanism_liability(&inv.config, &inv.plan),
        Command::MechanismWindfall => commands::mechanism_windfall(&inv.config, &inv.plan),
        Command::MechanismWarningShot => commands::mechanism_warning_shot(&inv.config, &inv.plan),
    }
}

fn try_run(args: &[String]) -> Result<(), CliError> {
    let inv = parse(args)?;
    match pool_from_env()? {
        Some(pool) => pool.install(|| execute(&inv)),
        None => execute(&inv),
    }
}

pub fn run() -> u8 {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--help" || a == "-h") {
        println!("{}", usage());
        return 0;
    }
    if args.is_empty() {
        eprintln!("{}", usage());
        return 1;
    }
    match try_run(&args) {
        Ok(()) => 0,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}
