use std::path::{Path, PathBuf};

use cavity_entangler::dispersive::{ApproxModel, Regime};
use cavity_entangler::general::DEGENERACY_RTOL;
use cavity_entangler::model::EQUAL_DETUNING_RTOL;
use cavity_entangler::oracle::{evolve_rk4, evolve_volterra, IntegratorConfig, Method};
use cavity_entangler::spectrum::{analyze_beats, BeatAnalysis};
use cavity_entangler::subradiant::evolve_subradiant;
use cavity_entangler::{
    evolve_exact, stationary_concurrence, InitialState, SystemParams, TimeGrid, Trajectory,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::output::{fmt_f64, write_file, write_json, Table};
use crate::scenario::{Axis, Scenario, Solver};

pub const THREADS_ENV: &str = "CAVITY_ENTANGLER_THREADS";

/// Volterra is second order; its guard is this multiple of the RK4 guard.
pub const VOLTERRA_GUARD_FACTOR: f64 = 10.0;

/// Preference order for the trajectory written to the amplitude columns.
const PRIMARY_ORDER: [Solver; 4] = [Solver::Exact, Solver::Closed, Solver::Rk4, Solver::Volterra];

#[derive(Clone, Debug)]
pub struct SolverOutput {
    pub solver: Solver,
    /// Amplitudes; `None` for approximate formulas.
    pub trajectory: Option<Trajectory>,
    pub concurrence: Vec<f64>,
    pub dt: Option<f64>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairMetric {
    pub solver_a: Solver,
    pub solver_b: Solver,
    pub quantity: &'static str,
    pub sup_norm: f64,
    pub l2: f64,
    /// Tolerance checked against `sup_norm`, when the pair is guarded.
    pub guard: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
struct SolverRecord {
    solver: Solver,
    dt: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
struct Tolerances {
    guard_rk4: f64,
    guard_volterra: f64,
    guard_closed: f64,
    equal_detuning_rtol: f64,
    degeneracy_rtol: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    caption: Option<String>,
    /// Time column: `t` in the units of the inputs, i.e. `λt` when `lambda = 1`.
    time_unit: &'static str,
    scenario: Scenario,
    params: SystemParams,
    normalized_params: SystemParams,
    solvers: Vec<SolverRecord>,
    tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<SweepRecord>,
    checks: Vec<PairMetric>,
    outputs: Vec<String>,
    warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
struct SweepRecord {
    axis: Axis,
    values: Vec<f64>,
}

/// What a command wrote, for callers that want to inspect it.
#[derive(Clone, Debug)]
pub struct Report {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

fn oracle_concurrence(traj: &Trajectory) -> Vec<f64> {
    traj.c1
        .iter()
        .zip(&traj.c2)
        .map(|(a, b)| (2.0 * a.norm() * b.norm()).min(1.0))
        .collect()
}

fn default_dt(params: &SystemParams, method: Method) -> f64 {
    IntegratorConfig::default_for(params, method, 1.0).dt
}

fn run_oracle(
    method: Method,
    scenario: &Scenario,
    params: &SystemParams,
    init: &InitialState,
    grid: &TimeGrid,
) -> CliResult<(Trajectory, f64)> {
    let spacing = grid.uniform_step().expect("scenario grids are uniform");
    let dt_max = scenario.dt.unwrap_or_else(|| default_dt(params, method));
    let cfg = IntegratorConfig::aligned(method, grid.t_max(), spacing, dt_max);
    let mut traj = match method {
        Method::Rk4 => evolve_rk4(init, params, &cfg),
        Method::VolterraTrapezoid => evolve_volterra(init, params, &cfg),
    }
    .map_err(CliError::from_model)?;
    assert_eq!(traj.len(), grid.len(), "oracle samples do not line up with the output grid");
    traj.times = grid.times().to_vec();
    Ok((traj, cfg.dt))
}

pub fn run_solver(
    solver: Solver,
    scenario: &Scenario,
    params: &SystemParams,
    init: &InitialState,
    grid: &TimeGrid,
) -> CliResult<SolverOutput> {
    let (trajectory, dt) = match solver {
        Solver::Exact => (evolve_exact(grid, init, params).map_err(CliError::from_model)?, None),
        Solver::Closed => (evolve_subradiant(grid, init, params).map_err(CliError::from_model)?, None),
        Solver::Rk4 => {
            let (t, dt) = run_oracle(Method::Rk4, scenario, params, init, grid)?;
            (t, Some(dt))
        }
        Solver::Volterra => {
            let (t, dt) = run_oracle(Method::VolterraTrapezoid, scenario, params, init, grid)?;
            (t, Some(dt))
        }
        Solver::Approx(regime) => {
            let model = ApproxModel::new(init, params, regime);
            let concurrence = grid.times().iter().map(|&t| model.value(t)).collect();
            let warnings = model.warnings.iter().map(|w| format!("approx:{regime}: {w}")).collect();
            return Ok(SolverOutput { solver, trajectory: None, concurrence, dt: None, warnings });
        }
    };
    let concurrence = oracle_concurrence(&trajectory);
    Ok(SolverOutput { solver, trajectory: Some(trajectory), concurrence, dt, warnings: Vec::new() })
}

fn guard_for(a: Solver, b: Solver, guard: f64) -> Option<f64> {
    let reference = |s: Solver| matches!(s, Solver::Exact | Solver::Closed);
    let tol = |s: Solver| match s {
        Solver::Volterra => Some(guard * VOLTERRA_GUARD_FACTOR),
        Solver::Rk4 | Solver::Closed | Solver::Exact => Some(guard),
        Solver::Approx(_) => None,
    };
    match (reference(a), reference(b)) {
        (true, _) => tol(b),
        (_, true) => tol(a),
        _ => None,
    }
}

fn sup_and_l2(times: &[f64], a: &[f64], b: &[f64]) -> (f64, f64) {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let sup = diff.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    (sup, cavity_entangler::dispersive::rms(times, &diff))
}

/// Pairwise distances between solver outputs in selection order. Pairs of a
/// reference solver (exact, closed) with another amplitude solver carry a guard.
pub fn pair_metrics(outputs: &[SolverOutput], times: &[f64], guard: f64) -> Vec<PairMetric> {
    let mut metrics = Vec::new();
    for (i, a) in outputs.iter().enumerate() {
        for b in &outputs[i + 1..] {
            if let (Some(ta), Some(tb)) = (&a.trajectory, &b.trajectory) {
                let amp = |tr: &Trajectory, k: usize| [tr.c1[k], tr.c2[k]];
                let dist: Vec<f64> = (0..times.len())
                    .map(|k| {
                        let (x, y) = (amp(ta, k), amp(tb, k));
                        (x[0] - y[0]).norm().max((x[1] - y[1]).norm())
                    })
                    .collect();
                let zeros = vec![0.0; dist.len()];
                let (sup, l2) = sup_and_l2(times, &dist, &zeros);
                metrics.push(PairMetric {
                    solver_a: a.solver,
                    solver_b: b.solver,
                    quantity: "amplitudes",
                    sup_norm: sup,
                    l2,
                    guard: guard_for(a.solver, b.solver, guard),
                });
            }
            let (sup, l2) = sup_and_l2(times, &a.concurrence, &b.concurrence);
            metrics.push(PairMetric {
                solver_a: a.solver,
                solver_b: b.solver,
                quantity: "concurrence",
                sup_norm: sup,
                l2,
                guard: None,
            });
        }
    }
    metrics
}

fn check_guards(metrics: &[PairMetric]) -> CliResult<()> {
    for m in metrics {
        if let Some(g) = m.guard {
            if !(m.sup_norm <= g) {
                return Err(CliError::Guard {
                    a: m.solver_a.to_string(),
                    b: m.solver_b.to_string(),
                    sup: m.sup_norm,
                    guard: g,
                });
            }
        }
    }
    Ok(())
}

/// Every selected solver on one scenario, plus the trajectory used for the
/// amplitude columns.
#[derive(Clone, Debug)]
pub struct ScenarioRun {
    pub params: SystemParams,
    pub init: InitialState,
    pub grid: TimeGrid,
    pub outputs: Vec<SolverOutput>,
    pub primary: usize,
    pub metrics: Vec<PairMetric>,
}

impl ScenarioRun {
    pub fn primary(&self) -> &SolverOutput {
        &self.outputs[self.primary]
    }

    pub fn primary_trajectory(&self) -> &Trajectory {
        self.primary().trajectory.as_ref().expect("primary solver has amplitudes")
    }

    pub fn approx(&self) -> impl Iterator<Item = (Regime, &SolverOutput)> {
        self.outputs.iter().filter_map(|o| match o.solver {
            Solver::Approx(r) => Some((r, o)),
            _ => None,
        })
    }

    pub fn warnings(&self) -> Vec<String> {
        self.outputs.iter().flat_map(|o| o.warnings.iter().cloned()).collect()
    }
}

/// Runs every selected solver and enforces the cross-solver guard. When only
/// approximate formulas are selected the exact solver supplies the amplitudes.
pub fn run_scenario(scenario: &Scenario) -> CliResult<ScenarioRun> {
    let (params, init, grid) = scenario.validate()?;
    let mut solvers: Vec<Solver> = Vec::new();
    for s in &scenario.solvers {
        if !solvers.contains(s) {
            solvers.push(*s);
        }
    }
    if !solvers.iter().any(Solver::is_trajectory) {
        solvers.insert(0, Solver::Exact);
    }
    let outputs = solvers
        .iter()
        .map(|&s| run_solver(s, scenario, &params, &init, &grid))
        .collect::<CliResult<Vec<_>>>()?;
    let primary = PRIMARY_ORDER
        .iter()
        .find_map(|p| outputs.iter().position(|o| o.solver == *p))
        .expect("a trajectory solver is always present");
    let metrics = pair_metrics(&outputs, grid.times(), scenario.guard);
    check_guards(&metrics)?;
    Ok(ScenarioRun { params, init, grid, outputs, primary, metrics })
}

fn trajectory_header(run: &ScenarioRun, leading: &[&str]) -> Vec<String> {
    let mut h: Vec<String> = leading.iter().map(|s| s.to_string()).collect();
    h.extend(["lambda_t", "re_c1", "im_c1", "re_c2", "im_c2", "concurrence"].map(String::from));
    h.extend(run.approx().map(|(r, _)| format!("approx_{r}")));
    h
}

fn trajectory_rows(run: &ScenarioRun, table: &mut Table, leading: &[f64]) {
    let traj = run.primary_trajectory();
    let conc = &run.primary().concurrence;
    let approx: Vec<&[f64]> = run.approx().map(|(_, o)| o.concurrence.as_slice()).collect();
    for k in 0..traj.len() {
        let mut row: Vec<f64> = leading.to_vec();
        row.extend([traj.times[k], traj.c1[k].re, traj.c1[k].im, traj.c2[k].re, traj.c2[k].im, conc[k]]);
        row.extend(approx.iter().map(|a| a[k]));
        table.numeric_row(&row);
    }
}

fn manifest(
    command: &'static str,
    scenario: &Scenario,
    caption: Option<&str>,
    run: &ScenarioRun,
    checks: Vec<PairMetric>,
    warnings: Vec<String>,
) -> Manifest {
    Manifest {
        tool: "cavity-entangler",
        version: env!("CARGO_PKG_VERSION"),
        command,
        caption: caption.map(str::to_string),
        time_unit: "t in input units (lambda*t when lambda = 1)",
        scenario: scenario.clone(),
        params: run.params,
        normalized_params: run.params.normalized(),
        solvers: run.outputs.iter().map(|o| SolverRecord { solver: o.solver, dt: o.dt }).collect(),
        tolerances: Tolerances {
            guard_rk4: scenario.guard,
            guard_volterra: scenario.guard * VOLTERRA_GUARD_FACTOR,
            guard_closed: scenario.guard,
            equal_detuning_rtol: EQUAL_DETUNING_RTOL,
            degeneracy_rtol: DEGENERACY_RTOL,
        },
        sweep: None,
        checks,
        outputs: Vec::new(),
        warnings,
    }
}

fn finish(out: &Path, stem: &str, mut m: Manifest, files: Vec<(String, String)>) -> CliResult<Report> {
    let mut paths = Vec::new();
    for (name, contents) in &files {
        paths.push(write_file(out, name, contents)?);
    }
    m.outputs = files.into_iter().map(|(n, _)| n).collect();
    paths.push(write_json(out, &format!("{stem}.manifest.json"), &m)?);
    Ok(Report { files: paths, warnings: m.warnings })
}

pub fn solve(scenario: &Scenario, caption: Option<&str>, out: &Path) -> CliResult<Report> {
    let run = run_scenario(scenario)?;
    let mut table = Table::new(&trajectory_header(&run, &[]));
    trajectory_rows(&run, &mut table, &[]);
    let stem = format!("{}.solve", scenario.name);
    let m = manifest("solve", scenario, caption, &run, run.metrics.clone(), run.warnings());
    finish(out, &stem, m, vec![(format!("{stem}.csv"), table.as_str().to_string())])
}

pub fn compare(scenario: &Scenario, caption: Option<&str>, out: &Path) -> CliResult<Report> {
    let distinct: Vec<&Solver> =
        scenario.solvers.iter().enumerate().filter(|(i, s)| !scenario.solvers[..*i].contains(s)).map(|(_, s)| s).collect();
    if distinct.len() < 2 {
        return Err(CliError::invalid("solvers", "compare needs at least two distinct solvers"));
    }
    let run = run_scenario(scenario)?;
    let mut table = Table::new(&["solver_a", "solver_b", "quantity", "sup_norm", "l2"]);
    for m in &run.metrics {
        table.row([
            m.solver_a.to_string(),
            m.solver_b.to_string(),
            m.quantity.to_string(),
            fmt_f64(m.sup_norm),
            fmt_f64(m.l2),
        ]);
    }
    let stem = format!("{}.compare", scenario.name);
    let m = manifest("compare", scenario, caption, &run, run.metrics.clone(), run.warnings());
    finish(out, &stem, m, vec![(format!("{stem}.csv"), table.as_str().to_string())])
}

fn thread_count() -> CliResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::invalid(THREADS_ENV, format!("`{v}` is not a positive integer"))),
        },
    }
}

pub fn sweep(scenario: &Scenario, axis: Axis, values: &[f64], caption: Option<&str>, out: &Path) -> CliResult<Report> {
    if values.is_empty() {
        return Err(CliError::invalid("values", "no sweep values given"));
    }
    let points: Vec<Scenario> = values
        .iter()
        .map(|&v| {
            let mut s = scenario.clone();
            axis.set(&mut s, v)?;
            s.validate()?;
            Ok(s)
        })
        .collect::<CliResult<_>>()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::invalid(THREADS_ENV, e.to_string()))?;
    let runs: Vec<CliResult<ScenarioRun>> = pool.install(|| points.par_iter().map(run_scenario).collect());
    let runs = runs.into_iter().collect::<CliResult<Vec<_>>>()?;

    let key = axis.key();
    let mut long = Table::new(&trajectory_header(&runs[0], &[key]));
    let mut summary = Table::new(&[
        key,
        "stationary_concurrence",
        "max_concurrence",
        "argmax_lambda_t",
        "final_concurrence",
    ]);
    let mut checks = Vec::new();
    let mut warnings = Vec::new();
    for (&v, run) in values.iter().zip(&runs) {
        trajectory_rows(run, &mut long, &[v]);
        let c = &run.primary().concurrence;
        let k = cavity_entangler::dispersive::argmax(c);
        summary.numeric_row(&[
            v,
            stationary_concurrence(&run.init, &run.params),
            c[k],
            run.grid.times()[k],
            *c.last().unwrap(),
        ]);
        checks.extend(run.metrics.iter().cloned());
        warnings.extend(run.warnings().into_iter().map(|w| format!("{key} = {v}: {w}")));
    }
    let stem = format!("{}.sweep", scenario.name);
    let mut m = manifest("sweep", scenario, caption, &runs[0], checks, warnings);
    m.sweep = Some(SweepRecord { axis, values: values.to_vec() });
    finish(
        out,
        &stem,
        m,
        vec![
            (format!("{stem}.csv"), long.as_str().to_string()),
            (format!("{stem}.summary.csv"), summary.as_str().to_string()),
        ],
    )
}

fn beat_rows(table: &mut Table, series: &str, analysis: &BeatAnalysis) {
    for p in &analysis.peaks {
        let nearest = analysis
            .expected
            .iter()
            .cloned()
            .min_by(|a, b| (a - p.frequency).abs().total_cmp(&(b - p.frequency).abs()))
            .unwrap();
        let matched = analysis.matched.iter().flatten().any(|m| m == p);
        table.row([
            series.to_string(),
            fmt_f64(p.frequency),
            fmt_f64(p.amplitude),
            fmt_f64(nearest),
            matched.to_string(),
        ]);
    }
}

#[derive(Clone, Debug, Serialize)]
struct BeatRecord {
    series: &'static str,
    expected: [f64; 3],
    bin_width: f64,
    resolvable: bool,
}

pub fn beats(scenario: &Scenario, caption: Option<&str>, out: &Path) -> CliResult<Report> {
    let run = run_scenario(scenario)?;
    let dt = run.grid.uniform_step().expect("scenario grids are uniform");
    let traj = run.primary_trajectory();
    let population: Vec<f64> = traj.c2.iter().map(|c| c.norm_sqr()).collect();
    let mut warnings = run.warnings();
    if run.params.rabi_ratio() <= 1.0 {
        warnings.push(format!(
            "R/lambda = {} is on the bad-cavity side; beats are not expected to be resolvable",
            run.params.rabi_ratio()
        ));
    }
    let mut table = Table::new(&["series", "frequency", "amplitude", "nearest_expected", "matched"]);
    let mut records = Vec::new();
    for (name, series) in [("concurrence", &run.primary().concurrence), ("population_2", &population)] {
        let analysis = analyze_beats(series, dt, &run.params).map_err(CliError::from_model)?;
        beat_rows(&mut table, name, &analysis);
        records.push(BeatRecord {
            series: name,
            expected: analysis.expected,
            bin_width: analysis.bin_width,
            resolvable: analysis.resolvable,
        });
        if !analysis.resolvable {
            warnings.push(format!("{name}: beat lines not resolvable"));
        }
    }
    let stem = format!("{}.beats", scenario.name);
    let m = manifest("beats", scenario, caption, &run, run.metrics.clone(), warnings);
    let mut files = vec![(format!("{stem}.csv"), table.as_str().to_string())];
    files.push((
        format!("{stem}.analysis.json"),
        serde_json::to_string_pretty(&records).expect("records serialize") + "\n",
    ));
    finish(out, &stem, m, files)
}
