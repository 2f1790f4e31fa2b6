use std::path::PathBuf;
use std::process::ExitCode;

use cavity_entangler_cli::run::{beats, compare, solve, sweep, Report};
use cavity_entangler_cli::{find_preset, parse_values, presets, Axis, CliError, CliResult, Scenario};
use clap::{Args, Parser, Subcommand};

/// Two qubits in a common lossy cavity: trajectories, sweeps and solver checks.
#[derive(Parser)]
#[command(name = "cavity-entangler", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Concurrence and amplitudes of one scenario.
    Solve(Common),
    /// One trajectory per value of a scenario input.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// delta, r1, s, phi or R. Defaults to the preset's curves.
        #[arg(long)]
        axis: Option<String>,
        /// `a,b,c` or `start:stop:count`.
        #[arg(long, allow_hyphen_values = true)]
        values: Option<String>,
    },
    /// Pairwise distances between the selected solvers.
    Compare(Common),
    /// Spectral peaks of the concurrence and of |c2|^2.
    Beats(Common),
    /// Built-in figure scenarios.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    preset: Option<String>,
    /// `key = value` scenario file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    dt: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    tmax: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    points: Option<String>,
    /// closed, exact, rk4, volterra or approx:<regime>; repeatable.
    #[arg(long = "solver")]
    solvers: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    guard: Option<String>,
    /// Any scenario key, e.g. `--set delta=0.7`; repeatable, applied last.
    #[arg(long = "set", allow_hyphen_values = true)]
    sets: Vec<String>,
}

struct Resolved {
    scenario: Scenario,
    caption: Option<String>,
    variants: Option<(Axis, Vec<f64>)>,
}

/// Preset, then config file, then flags.
fn resolve(c: &Common) -> CliResult<Resolved> {
    let (mut scenario, caption, variants) = match &c.preset {
        Some(name) => {
            let p = find_preset(name)?;
            (p.scenario, Some(p.caption.to_string()), Some(p.variants))
        }
        None => (Scenario::default(), None, None),
    };
    if let Some(path) = &c.config {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
        scenario.apply_config_text(&text)?;
    }
    for (key, value) in [("dt", &c.dt), ("t_max", &c.tmax), ("points", &c.points), ("guard", &c.guard)] {
        if let Some(v) = value {
            scenario.apply(key, v)?;
        }
    }
    if !c.solvers.is_empty() {
        scenario.apply("solvers", &c.solvers.join(","))?;
    }
    for set in &c.sets {
        let (k, v) = set
            .split_once('=')
            .ok_or_else(|| CliError::invalid("set", format!("`{set}` is not key=value")))?;
        scenario.apply(k.trim(), v.trim())?;
    }
    Ok(Resolved { scenario, caption, variants })
}

fn execute(cli: Cli) -> CliResult<Option<Report>> {
    let report = match cli.command {
        Command::Solve(c) => {
            let r = resolve(&c)?;
            solve(&r.scenario, r.caption.as_deref(), &c.out)?
        }
        Command::Compare(c) => {
            let r = resolve(&c)?;
            compare(&r.scenario, r.caption.as_deref(), &c.out)?
        }
        Command::Beats(c) => {
            let r = resolve(&c)?;
            beats(&r.scenario, r.caption.as_deref(), &c.out)?
        }
        Command::Sweep { common, axis, values } => {
            let r = resolve(&common)?;
            let (axis, values) = match (axis, values, r.variants) {
                (Some(a), Some(v), _) => (a.parse()?, parse_values(&v)?),
                (None, None, Some(variants)) => variants,
                (None, Some(_), _) => return Err(CliError::invalid("axis", "--values needs --axis")),
                (Some(_), None, _) => return Err(CliError::invalid("values", "--axis needs --values")),
                (None, None, None) => return Err(CliError::invalid("axis", "give --axis and --values")),
            };
            sweep(&r.scenario, axis, &values, r.caption.as_deref(), &common.out)?
        }
        Command::Presets { action: PresetAction::List } => {
            for p in presets() {
                println!("{}\t{}", p.name, p.caption);
            }
            return Ok(None);
        }
    };
    Ok(Some(report))
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(report) => {
            if let Some(report) = report {
                for w in &report.warnings {
                    eprintln!("warning: {w}");
                }
                for f in &report.files {
                    println!("{}", f.display());
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
