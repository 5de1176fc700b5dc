//! Command-line front end: run the builtin or user-supplied scenarios,
//! list what is available, validate a config, or print the pole table.

use clap::{Args, Parser, Subcommand};
use qdecay::scenario::{
    builtin, builtin_scenarios, run_scenario, validate_config, ScenarioConfig, ScenarioKind,
    TimeGridSpec,
};
use qdecay::{ModelParams, ResonantBasis};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qdecay", about = "Two-particle quantum decay from a delta-shell potential")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its CSV and report files
    Run(RunArgs),
    /// List the builtin scenarios
    List,
    /// Parse and validate a scenario config without writing output
    Validate {
        /// Path to a TOML scenario config
        config: PathBuf,
    },
    /// Print the pole table as CSV
    Poles {
        #[arg(long, default_value_t = 6.0)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 20)]
        poles: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Builtin scenario name (fig1, fig2, fig3, free)
    name: Option<String>,
    /// TOML config file; overrides NAME
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; defaults to QDECAY_OUT or ./out/<name>
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    poles: Option<usize>,
    /// Initial-state kind: factorized_symmetric, entangled_symmetric,
    /// entangled_antisymmetric, free
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    alpha: Option<usize>,
    #[arg(long)]
    beta: Option<usize>,
    /// Time grid as MIN:MAX:POINTS in units of the longest lifetime
    #[arg(long)]
    grid: Option<String>,
}

fn parse_kind(s: &str) -> Result<ScenarioKind, String> {
    match s {
        "factorized_symmetric" => Ok(ScenarioKind::FactorizedSymmetric),
        "entangled_symmetric" => Ok(ScenarioKind::EntangledSymmetric),
        "entangled_antisymmetric" => Ok(ScenarioKind::EntangledAntisymmetric),
        "free" => Ok(ScenarioKind::Free),
        other => Err(format!("unknown kind '{other}'")),
    }
}

fn parse_grid(s: &str) -> Result<TimeGridSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid must be MIN:MAX:POINTS, got '{s}'"));
    }
    let t_min_tau1: f64 = parts[0].parse().map_err(|e| format!("grid min: {e}"))?;
    let t_max_tau1: f64 = parts[1].parse().map_err(|e| format!("grid max: {e}"))?;
    let points: usize = parts[2].parse().map_err(|e| format!("grid points: {e}"))?;
    Ok(TimeGridSpec { t_min_tau1, t_max_tau1, points })
}

fn resolve_config(args: &RunArgs) -> Result<ScenarioConfig, String> {
    let mut cfg = if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        ScenarioConfig::from_toml(&text).map_err(|e| e.to_string())?
    } else {
        let name = args.name.as_deref().ok_or("give a builtin scenario name or --config")?;
        builtin(name).map_err(|e| e.to_string())?
    };
    if let Some(v) = args.lambda {
        cfg.lambda = v;
    }
    if let Some(v) = args.a {
        cfg.a = v;
    }
    if let Some(v) = args.poles {
        cfg.n_poles = v;
    }
    if let Some(k) = &args.kind {
        cfg.kind = parse_kind(k)?;
    }
    if let Some(v) = args.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = args.beta {
        cfg.beta = v;
    }
    if let Some(g) = &args.grid {
        cfg.grid = parse_grid(g)?;
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn run(args: &RunArgs) -> Result<bool, String> {
    let cfg = resolve_config(args)?;
    let out = args
        .out
        .clone()
        .or_else(|| std::env::var_os("QDECAY_OUT").map(|v| PathBuf::from(v).join(&cfg.name)))
        .unwrap_or_else(|| PathBuf::from("out").join(&cfg.name));
    let report = run_scenario(&cfg, &out).map_err(|e| e.to_string())?;
    print!("{}", report.render_text());
    println!("outputs in {}", out.display());
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(args) => run(args),
        Command::List => {
            for s in builtin_scenarios() {
                println!("{:<6} {:?} alpha={} beta={} lambda={}", s.name, s.kind, s.alpha, s.beta, s.lambda);
            }
            Ok(true)
        }
        Command::Validate { config } => std::fs::read_to_string(config)
            .map_err(|e| format!("{}: {e}", config.display()))
            .and_then(|text| ScenarioConfig::from_toml(&text).map_err(|e| e.to_string()))
            .and_then(|cfg| validate_config(&cfg).map_err(|e| e.to_string()))
            .map(|()| {
                println!("config ok");
                true
            }),
        Command::Poles { lambda, a, poles } => ModelParams::new(*lambda, *a, *poles)
            .and_then(ResonantBasis::build)
            .map_err(|e| e.to_string())
            .map(|basis| {
                print!("{}", qdecay::poles::pole_table_csv(&basis));
                true
            }),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
