use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use cavity_entangler::dispersive::Regime;
use cavity_entangler::oracle::IntegratorConfig;
use cavity_entangler::{InitialState, SystemParams, TimeGrid, C64};
use serde::Serialize;

use crate::config::{parse_config, parse_f64, parse_usize};
use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Solver {
    Closed,
    Exact,
    Rk4,
    Volterra,
    Approx(Regime),
}

impl Solver {
    pub fn is_trajectory(&self) -> bool {
        !matches!(self, Solver::Approx(_))
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Solver::Closed => f.write_str("closed"),
            Solver::Exact => f.write_str("exact"),
            Solver::Rk4 => f.write_str("rk4"),
            Solver::Volterra => f.write_str("volterra"),
            Solver::Approx(r) => write!(f, "approx:{r}"),
        }
    }
}

impl FromStr for Solver {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s.trim() {
            "closed" => Ok(Solver::Closed),
            "exact" => Ok(Solver::Exact),
            "rk4" => Ok(Solver::Rk4),
            "volterra" => Ok(Solver::Volterra),
            other => match other.strip_prefix("approx:") {
                Some(regime) => regime.parse().map(Solver::Approx).map_err(CliError::from_model),
                None => Err(CliError::invalid("solver", format!("unknown solver `{other}`"))),
            },
        }
    }
}

impl Serialize for Solver {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InitSpec {
    SeparabilityPhase { s: f64, phi: f64 },
    Amplitudes { c01: [f64; 2], c02: [f64; 2] },
}

/// A single run: parameters, initial state, output grid and solvers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scenario {
    pub name: String,
    pub lambda: f64,
    #[serde(rename = "R")]
    pub rabi: f64,
    pub delta_1: f64,
    pub delta_2: f64,
    pub r_1: f64,
    pub init: InitSpec,
    pub t_max: f64,
    pub n_points: usize,
    pub solvers: Vec<Solver>,
    /// Oracle step; the default is `1e-3 / max(λ, ℛ, |δ₁|, |δ₂|)`.
    pub dt: Option<f64>,
    /// Sup-norm tolerance between the exact solver and RK4; Volterra gets
    /// ten times this.
    pub guard: f64,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            name: "scenario".into(),
            lambda: 1.0,
            rabi: 1.0,
            delta_1: 0.0,
            delta_2: 0.0,
            r_1: FRAC_1_SQRT_2,
            init: InitSpec::SeparabilityPhase { s: 0.0, phi: 0.0 },
            t_max: 10.0,
            n_points: 1001,
            solvers: vec![Solver::Exact],
            dt: None,
            guard: 1e-6,
        }
    }
}

impl Scenario {
    /// Sets one configuration key.
    pub fn apply(&mut self, key: &str, value: &str) -> CliResult<()> {
        let num = || parse_f64(key, value);
        match key {
            "name" => {
                let ok = !value.is_empty()
                    && value.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
                if !ok {
                    return Err(CliError::invalid("name", "use letters, digits, '-', '_' or '.'"));
                }
                self.name = value.to_string();
            }
            "lambda" => self.lambda = num()?,
            "R" => self.rabi = num()?,
            "delta" => {
                let d = num()?;
                self.delta_1 = d;
                self.delta_2 = d;
            }
            "delta1" => self.delta_1 = num()?,
            "delta2" => self.delta_2 = num()?,
            "r1" => self.r_1 = num()?,
            "s" | "phi" => {
                let (mut s, mut phi) = match self.init {
                    InitSpec::SeparabilityPhase { s, phi } => (s, phi),
                    InitSpec::Amplitudes { .. } => (0.0, 0.0),
                };
                if key == "s" {
                    s = num()?;
                } else {
                    phi = num()?;
                }
                self.init = InitSpec::SeparabilityPhase { s, phi };
            }
            "c01_re" | "c01_im" | "c02_re" | "c02_im" => {
                let (mut c01, mut c02) = match self.init {
                    InitSpec::Amplitudes { c01, c02 } => (c01, c02),
                    InitSpec::SeparabilityPhase { .. } => ([0.0; 2], [0.0; 2]),
                };
                let v = num()?;
                match key {
                    "c01_re" => c01[0] = v,
                    "c01_im" => c01[1] = v,
                    "c02_re" => c02[0] = v,
                    _ => c02[1] = v,
                }
                self.init = InitSpec::Amplitudes { c01, c02 };
            }
            "t_max" => self.t_max = num()?,
            "points" => self.n_points = parse_usize(key, value)?,
            "dt" => self.dt = Some(num()?),
            "solvers" => {
                self.solvers = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(str::parse)
                    .collect::<CliResult<_>>()?;
            }
            "guard" => self.guard = num()?,
            other => return Err(CliError::invalid(other, "unknown key")),
        }
        Ok(())
    }

    pub fn apply_config_text(&mut self, text: &str) -> CliResult<()> {
        for (k, v) in parse_config(text)? {
            self.apply(&k, &v)?;
        }
        Ok(())
    }

    pub fn params(&self) -> CliResult<SystemParams> {
        SystemParams::from_detunings(self.lambda, self.rabi, self.delta_1, self.delta_2, self.r_1)
            .map_err(CliError::from_model)
    }

    pub fn initial_state(&self) -> CliResult<InitialState> {
        match self.init {
            InitSpec::SeparabilityPhase { s, phi } => InitialState::from_s_phi(s, phi),
            InitSpec::Amplitudes { c01, c02 } => {
                InitialState::new(C64::new(c01[0], c01[1]), C64::new(c02[0], c02[1]))
            }
        }
        .map_err(CliError::from_model)
    }

    pub fn grid(&self) -> CliResult<TimeGrid> {
        if self.n_points < 2 {
            return Err(CliError::invalid("points", format!("need at least 2, got {}", self.n_points)));
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(CliError::invalid("t_max", format!("must be positive, got {}", self.t_max)));
        }
        TimeGrid::uniform(self.t_max, self.n_points).map_err(CliError::from_model)
    }

    /// Checks every invariant; returns the parsed pieces.
    pub fn validate(&self) -> CliResult<(SystemParams, InitialState, TimeGrid)> {
        if self.solvers.is_empty() {
            return Err(CliError::invalid("solvers", "select at least one solver"));
        }
        if !(self.guard > 0.0) {
            return Err(CliError::invalid("guard", format!("must be positive, got {}", self.guard)));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) {
                return Err(CliError::invalid("dt", format!("must be positive, got {dt}")));
            }
        }
        let params = self.params()?;
        let init = self.initial_state()?;
        let grid = self.grid()?;
        if let Some(dt) = self.dt {
            let limit = IntegratorConfig::step_limit(&params);
            if dt > limit {
                return Err(CliError::invalid("dt", format!("{dt} exceeds the resolution limit {limit}")));
            }
        }
        if self.solvers.contains(&Solver::Closed) && !params.has_equal_detunings() {
            return Err(CliError::invalid("solvers", "the closed form needs delta1 = delta2"));
        }
        Ok((params, init, grid))
    }
}

/// Sweepable scenario inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axis {
    #[serde(rename = "delta")]
    Delta,
    #[serde(rename = "r1")]
    R1,
    #[serde(rename = "s")]
    S,
    #[serde(rename = "phi")]
    Phi,
    #[serde(rename = "R")]
    Rabi,
}

impl Axis {
    pub fn key(&self) -> &'static str {
        match self {
            Axis::Delta => "delta",
            Axis::R1 => "r1",
            Axis::S => "s",
            Axis::Phi => "phi",
            Axis::Rabi => "R",
        }
    }

    pub fn set(&self, scenario: &mut Scenario, value: f64) -> CliResult<()> {
        scenario.apply(self.key(), &format!("{value:e}"))
    }
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "delta" => Ok(Axis::Delta),
            "r1" => Ok(Axis::R1),
            "s" => Ok(Axis::S),
            "phi" => Ok(Axis::Phi),
            "R" | "rabi" => Ok(Axis::Rabi),
            other => Err(CliError::invalid("axis", format!("unknown axis `{other}` (delta, r1, s, phi, R)"))),
        }
    }
}

/// Sweep values: a comma list `a,b,c` or an inclusive range `start:stop:count`.
pub fn parse_values(text: &str) -> CliResult<Vec<f64>> {
    let text = text.trim();
    let values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::invalid("values", "range must be start:stop:count"));
        }
        let start = parse_f64("values", parts[0])?;
        let stop = parse_f64("values", parts[1])?;
        let count = parse_usize("values", parts[2])?;
        match count {
            0 => Vec::new(),
            1 => vec![start],
            n => (0..n).map(|k| start + (stop - start) * k as f64 / (n - 1) as f64).collect(),
        }
    } else {
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|v| parse_f64("values", v))
            .collect::<CliResult<Vec<_>>>()?
    };
    if values.is_empty() {
        return Err(CliError::invalid("values", "no sweep values given"));
    }
    Ok(values)
}

/// A figure scenario with the parameters of its caption.
#[derive(Clone, Debug)]
pub struct Preset {
    pub name: &'static str,
    pub caption: &'static str,
    pub scenario: Scenario,
    /// The curves drawn in the figure, as a sweep over one axis.
    pub variants: (Axis, Vec<f64>),
}

fn preset(
    name: &'static str,
    caption: &'static str,
    (rabi, d1, d2): (f64, f64, f64),
    (s, r_1): (f64, f64),
    (t_max, n_points): (f64, usize),
    r1_variants: &[f64],
) -> Preset {
    Preset {
        name,
        caption,
        scenario: Scenario {
            name: name.to_string(),
            rabi,
            delta_1: d1,
            delta_2: d2,
            r_1,
            init: InitSpec::SeparabilityPhase { s, phi: 0.0 },
            t_max,
            n_points,
            ..Scenario::default()
        },
        variants: (Axis::R1, r1_variants.to_vec()),
    }
}

pub fn presets() -> Vec<Preset> {
    let r_max = 3f64.sqrt() / 2.0;
    let sym = FRAC_1_SQRT_2;
    let mut list = vec![
        preset(
            "fig1a",
            "bad cavity R=0.1, s=0, phi=0, resonant limit (delta=0 assumed), r1 in {sqrt(3)/2, 1/sqrt(2), 1}",
            (0.1, 0.0, 0.0),
            (0.0, r_max),
            (300.0, 3001),
            &[r_max, sym, 1.0],
        ),
        preset(
            "fig1b",
            "bad cavity R=0.1, s=0, phi=0, delta1=delta2=0.7, r1 in {sqrt(3)/2, 1/sqrt(2), 1}",
            (0.1, 0.7, 0.7),
            (0.0, r_max),
            (300.0, 3001),
            &[r_max, sym, 1.0],
        ),
        preset(
            "fig2-dispersive-bad-cavity",
            "bad cavity R=0.1, s=1, dispersive delta1=delta2=10, r1 in {sqrt(3)/2, 1/sqrt(2), 1}",
            (0.1, 10.0, 10.0),
            (1.0, r_max),
            (6000.0, 6001),
            &[r_max, sym, 1.0],
        ),
        preset(
            "fig3-beats",
            "good cavity R=10, s=1, delta1=delta2=0.7, r1 in {sqrt(3)/2, 1/sqrt(2), 1}",
            (10.0, 0.7, 0.7),
            (1.0, r_max),
            (15.0, 15001),
            &[r_max, sym, 1.0],
        ),
        preset(
            "fig5a",
            "good cavity R=10, s=0, phi=0, delta1=delta2=0.7, r1 in {1/sqrt(2), 1}",
            (10.0, 0.7, 0.7),
            (0.0, sym),
            (15.0, 15001),
            &[sym, 1.0],
        ),
        preset(
            "fig5b",
            "good cavity R=10, s=0, phi=0, delta1=delta2=50, r1 in {1/sqrt(2), 1}",
            (10.0, 50.0, 50.0),
            (0.0, sym),
            (150.0, 30001),
            &[sym, 1.0],
        ),
        preset(
            "fig6a",
            "bad cavity R=0.1, s=0, phi=0, symmetric detuning delta1=-0.7, delta2=0.7, r1 in {sqrt(3)/2, 1/sqrt(2), 1, 0}",
            (0.1, -0.7, 0.7),
            (0.0, r_max),
            (3000.0, 6001),
            &[r_max, sym, 1.0, 0.0],
        ),
        preset(
            "fig6b",
            "bad cavity R=0.1, s=0, phi=0, asymmetric detuning delta1=-0.5, delta2=0.9, r1 in {sqrt(3)/2, 1/sqrt(2), 1, 0}",
            (0.1, -0.5, 0.9),
            (0.0, r_max),
            (3000.0, 6001),
            &[r_max, sym, 1.0, 0.0],
        ),
    ];
    let mut lossless = preset(
        "beats-lossless",
        "near-lossless lambda=1e-9 with R=1, delta1=delta2=0.3, r1=1/sqrt(2), qubit 2 excited; rates in units of R",
        (1.0, 0.3, 0.3),
        (1.0, sym),
        (200.0, 4001),
        &[sym],
    );
    lossless.scenario.lambda = 1e-9;
    list.push(lossless);
    list
}

pub fn find_preset(name: &str) -> CliResult<Preset> {
    presets()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| CliError::invalid("preset", format!("unknown preset `{name}`")))
}
