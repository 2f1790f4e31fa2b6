//! Perturbative and spectral pictures of the dynamics: the dispersive
//! effective Hamiltonian, the lossless dressed states, beat populations and
//! the approximate concurrence formulas together with a validity report
//! against the exact solver.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64 as C64;

use crate::entanglement::concurrence_trajectory;
use crate::error::{Error, Result};
use crate::general::evolve_exact;
use crate::model::{InitialState, SystemParams, TimeGrid};

/// `min|δ_j| ≤ DISPERSIVE_FACTOR·ℛ` is flagged as outside the dispersive regime.
pub const DISPERSIVE_FACTOR: f64 = 3.0;

/// Second-order effective qubit Hamiltonian with the cavity in vacuum:
/// `Σ_j s_j σ₊⁽ʲ⁾σ₋⁽ʲ⁾ + J(σ₊⁽¹⁾σ₋⁽²⁾ + h.c.)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveHamiltonian {
    /// Stark shift `ℛ²r₁²/δ₁`.
    pub stark_1: f64,
    /// Stark shift `ℛ²r₂²/δ₂`.
    pub stark_2: f64,
    /// Exchange `(ℛ²r₁r₂/2)(1/δ₁ + 1/δ₂)`.
    pub exchange: f64,
    /// Set when some detuning is not large compared with ℛ.
    pub regime_warning: bool,
}

impl EffectiveHamiltonian {
    /// The 2×2 matrix over `{|10⟩, |01⟩}`.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.stark_1, self.exchange], [self.exchange, self.stark_2]]
    }
}

pub fn effective_hamiltonian(params: &SystemParams) -> EffectiveHamiltonian {
    effective_hamiltonian_with(params, DISPERSIVE_FACTOR)
}

/// As [`effective_hamiltonian`] with a custom validity factor.
pub fn effective_hamiltonian_with(params: &SystemParams, factor: f64) -> EffectiveHamiltonian {
    let r2 = params.rabi * params.rabi;
    let (d1, d2) = (params.delta_1, params.delta_2);
    let shift = |r: f64, d: f64| if r == 0.0 { 0.0 } else { r2 * r * r / d };
    let exchange = if params.r_1 == 0.0 || params.r_2 == 0.0 {
        0.0
    } else {
        r2 * params.r_1 * params.r_2 / 2.0 * (1.0 / d1 + 1.0 / d2)
    };
    EffectiveHamiltonian {
        stark_1: shift(params.r_1, d1),
        stark_2: shift(params.r_2, d2),
        exchange,
        regime_warning: d1.abs().min(d2.abs()) <= factor * params.rabi,
    }
}

/// Lossless single-excitation Hamiltonian over `{|10⟩|0⟩, |01⟩|0⟩, |00⟩|1⟩}`,
/// with energies measured from the cavity frequency.
pub fn lossless_hamiltonian(params: &SystemParams) -> Matrix3<f64> {
    let g1 = params.w_weight * params.alpha_1;
    let g2 = params.w_weight * params.alpha_2;
    Matrix3::new(
        params.delta_1, 0.0, g1,
        0.0, params.delta_2, g2,
        g1, g2, 0.0,
    )
}

/// Dressed eigenstates of the lossless Hamiltonian for equal detunings.
///
/// `state_plus` and `state_minus` are amplitudes over
/// `{|ψ₊⟩|0⟩, |00⟩|1⟩}`; the third eigenstate is `|ψ₋⟩|0⟩` with energy δ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedSpectrum {
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub omega_zero: f64,
    pub state_plus: [f64; 2],
    pub state_minus: [f64; 2],
}

impl DressedSpectrum {
    /// Dressed states expanded over `{|10⟩|0⟩, |01⟩|0⟩, |00⟩|1⟩}`,
    /// ordered (φ₊, φ₋, φ₀).
    pub fn product_basis_states(&self, params: &SystemParams) -> [Vector3<f64>; 3] {
        let (r1, r2) = (params.r_1, params.r_2);
        let lift = |s: [f64; 2]| Vector3::new(s[0] * r1, s[0] * r2, s[1]);
        [
            lift(self.state_plus),
            lift(self.state_minus),
            Vector3::new(r2, -r1, 0.0),
        ]
    }
}

/// Eigenvector of `[[δ, ℛ], [ℛ, 0]]` for eigenvalue `own`, where `other` is
/// the second eigenvalue: `(−ℛ, other)` or `(own, ℛ)`, whichever is larger,
/// and `fallback` when both vanish (ℛ = δ = 0).
fn dressed_vector(rabi: f64, own: f64, other: f64, fallback: [f64; 2]) -> [f64; 2] {
    let n1 = (other * other + rabi * rabi).sqrt();
    let n2 = (own * own + rabi * rabi).sqrt();
    if n1 == 0.0 && n2 == 0.0 {
        fallback
    } else if n1 >= n2 {
        [-rabi / n1, other / n1]
    } else {
        [own / n2, rabi / n2]
    }
}

pub fn dressed_spectrum(params: &SystemParams) -> Result<DressedSpectrum> {
    let d = params.common_detuning()?;
    let r = params.rabi;
    let root = (4.0 * r * r + d * d).sqrt();
    let omega_plus = 0.5 * (d + root);
    // Stable form for the smaller root: ω₊ω₋ = −ℛ².
    let omega_minus = if omega_plus != 0.0 { -r * r / omega_plus } else { 0.5 * (d - root) };
    Ok(DressedSpectrum {
        omega_plus,
        omega_minus,
        omega_zero: d,
        state_plus: dressed_vector(r, omega_plus, omega_minus, [1.0, 0.0]),
        state_minus: dressed_vector(r, omega_minus, omega_plus, [0.0, 1.0]),
    })
}

/// Lossless excited-state population of qubit 2 starting from `|01⟩`,
/// to leading order in `δ/ℛ`:
/// `r₁⁴ + (r₂⁴/2)[1 + cos 2ℛt] + 2r₁²r₂² cos(ℛt) cos(δt/2)`.
pub fn population_beats(t: f64, params: &SystemParams) -> Result<f64> {
    let d = params.common_detuning()?;
    let (r1, r2, r) = (params.r_1, params.r_2, params.rabi);
    let (a, b) = (r1 * r1, r2 * r2);
    let value = a * a + b * b / 2.0 * (1.0 + (2.0 * r * t).cos()) + 2.0 * a * b * (r * t).cos() * (d * t / 2.0).cos();
    Ok(value.clamp(0.0, 1.0))
}

/// Approximate concurrence formulas, each valid in a specific regime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    /// `e^{−(ℛ²/δ²)λt}`; `s = 0`, one qubit coupled, `δ ≫ λ ≫ ℛ`.
    DispersiveDecaySingle,
    /// `e^{−2(ℛ²/δ²)λt}`; `s = 0`, `r₁ = 1/√2`, `δ ≫ λ ≫ ℛ`.
    DispersiveDecaySymmetric,
    /// `½√(1 + e^{−4x} − 2e^{−2x} cos(2ℛ²t/δ))`, `x = (ℛ²/δ²)λt`;
    /// `s = 1`, `r₁ = 1/√2`, `δ ≫ λ ≫ ℛ`.
    DispersiveFactorized,
    /// `½√(1 + e^{−2λt}cos⁴ℛt − 2e^{−λt}cos²ℛt cos δt)`;
    /// `s = 1`, `r₁ = 1/√2`, `δ ≈ λ ≪ ℛ`.
    BeatsSmallDetuning,
    /// `e^{−λt/2}√(cos²ℛt + (δ²+λ²)/(4ℛ²) sin²ℛt + (λ/ℛ) sinℛt cosℛt)`;
    /// `s = 0`, one qubit coupled, `δ ≪ ℛ`.
    SmallDetuningSingle,
    /// `e^{−(ℛ²/δ²)λt}`; `s = 0`, one qubit coupled, `δ ≫ ℛ`.
    FarDetuningSingle,
}

impl Regime {
    pub const ALL: [Regime; 6] = [
        Regime::DispersiveDecaySingle,
        Regime::DispersiveDecaySymmetric,
        Regime::DispersiveFactorized,
        Regime::BeatsSmallDetuning,
        Regime::SmallDetuningSingle,
        Regime::FarDetuningSingle,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Regime::DispersiveDecaySingle => "dispersive-decay-single",
            Regime::DispersiveDecaySymmetric => "dispersive-decay-symmetric",
            Regime::DispersiveFactorized => "dispersive-factorized",
            Regime::BeatsSmallDetuning => "beats-small-detuning",
            Regime::SmallDetuningSingle => "small-detuning-single",
            Regime::FarDetuningSingle => "far-detuning-single",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Regime::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::UnknownRegime(s.to_string()))
    }
}

/// A violated assumption of an approximate formula. The formula is still
/// evaluated; the warning tells the caller not to trust it.
#[derive(Clone, Debug, PartialEq)]
pub enum RegimeWarning {
    UnequalDetunings { delta_21: f64 },
    NotDispersive { delta: f64, rabi: f64 },
    DetuningNotLargeComparedToLinewidth { delta: f64, lambda: f64 },
    NotSmallDetuning { delta: f64, lambda: f64, rabi: f64 },
    CouplingMismatch { expected: &'static str, r_1: f64 },
    InitialStateMismatch { expected: &'static str },
}

impl fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegimeWarning::UnequalDetunings { delta_21 } => {
                write!(f, "formula assumes equal detunings (delta_21 = {delta_21})")
            }
            RegimeWarning::NotDispersive { delta, rabi } => {
                write!(f, "|delta| = {} is not large compared with R = {rabi}", delta.abs())
            }
            RegimeWarning::DetuningNotLargeComparedToLinewidth { delta, lambda } => {
                write!(f, "|delta| = {} is not large compared with lambda = {lambda}", delta.abs())
            }
            RegimeWarning::NotSmallDetuning { delta, lambda, rabi } => {
                write!(f, "delta = {delta} and lambda = {lambda} must both be small compared with R = {rabi}")
            }
            RegimeWarning::CouplingMismatch { expected, r_1 } => {
                write!(f, "formula assumes r1 {expected}, got {r_1}")
            }
            RegimeWarning::InitialStateMismatch { expected } => {
                write!(f, "formula assumes the initial state {expected}")
            }
        }
    }
}

const STATE_TOL: f64 = 1e-9;

fn is_single_coupled(r_1: f64) -> bool {
    r_1 < STATE_TOL || (1.0 - r_1).abs() < STATE_TOL
}

fn is_symmetric_coupling(r_1: f64) -> bool {
    (r_1 - std::f64::consts::FRAC_1_SQRT_2).abs() < STATE_TOL
}

fn is_factorized(init: &InitialState) -> bool {
    init.c01.norm() < STATE_TOL || init.c02.norm() < STATE_TOL
}

fn is_maximally_entangled(init: &InitialState) -> bool {
    (init.c01.norm() - init.c02.norm()).abs() < STATE_TOL
}

/// An approximate formula bound to one parameter set, with its assumption check.
#[derive(Clone, Debug)]
pub struct ApproxModel {
    pub regime: Regime,
    lambda: f64,
    rabi: f64,
    delta: f64,
    pub warnings: Vec<RegimeWarning>,
}

impl ApproxModel {
    pub fn new(init: &InitialState, params: &SystemParams, regime: Regime) -> Self {
        let mut warnings = Vec::new();
        if !params.has_equal_detunings() {
            warnings.push(RegimeWarning::UnequalDetunings { delta_21: params.delta_21 });
        }
        let delta = params.delta_1;
        let (lambda, rabi, r_1) = (params.lambda, params.rabi, params.r_1);
        let dispersive = |w: &mut Vec<RegimeWarning>| {
            if delta.abs() <= DISPERSIVE_FACTOR * rabi {
                w.push(RegimeWarning::NotDispersive { delta, rabi });
            }
        };
        let far_from_linewidth = |w: &mut Vec<RegimeWarning>| {
            if delta.abs() <= DISPERSIVE_FACTOR * lambda {
                w.push(RegimeWarning::DetuningNotLargeComparedToLinewidth { delta, lambda });
            }
        };
        let small_detuning = |w: &mut Vec<RegimeWarning>| {
            if delta.abs() * DISPERSIVE_FACTOR >= rabi || lambda * DISPERSIVE_FACTOR >= rabi {
                w.push(RegimeWarning::NotSmallDetuning { delta, lambda, rabi });
            }
        };
        let single = |w: &mut Vec<RegimeWarning>| {
            if !is_single_coupled(r_1) {
                w.push(RegimeWarning::CouplingMismatch { expected: "in {0, 1}", r_1 });
            }
        };
        let symmetric = |w: &mut Vec<RegimeWarning>| {
            if !is_symmetric_coupling(r_1) {
                w.push(RegimeWarning::CouplingMismatch { expected: "= 1/sqrt(2)", r_1 });
            }
        };
        let factorized = |w: &mut Vec<RegimeWarning>| {
            if !is_factorized(init) {
                w.push(RegimeWarning::InitialStateMismatch { expected: "factorized (s = +-1)" });
            }
        };
        let entangled = |w: &mut Vec<RegimeWarning>| {
            if !is_maximally_entangled(init) {
                w.push(RegimeWarning::InitialStateMismatch { expected: "maximally entangled (s = 0)" });
            }
        };
        match regime {
            Regime::DispersiveDecaySingle => {
                dispersive(&mut warnings);
                far_from_linewidth(&mut warnings);
                single(&mut warnings);
                entangled(&mut warnings);
            }
            Regime::DispersiveDecaySymmetric => {
                dispersive(&mut warnings);
                far_from_linewidth(&mut warnings);
                symmetric(&mut warnings);
                entangled(&mut warnings);
                if (init.c01 - init.c02).norm() > STATE_TOL {
                    warnings.push(RegimeWarning::InitialStateMismatch { expected: "with phase 0" });
                }
            }
            Regime::DispersiveFactorized => {
                dispersive(&mut warnings);
                far_from_linewidth(&mut warnings);
                symmetric(&mut warnings);
                factorized(&mut warnings);
            }
            Regime::BeatsSmallDetuning => {
                small_detuning(&mut warnings);
                symmetric(&mut warnings);
                factorized(&mut warnings);
            }
            Regime::SmallDetuningSingle => {
                small_detuning(&mut warnings);
                single(&mut warnings);
                entangled(&mut warnings);
            }
            Regime::FarDetuningSingle => {
                dispersive(&mut warnings);
                single(&mut warnings);
                entangled(&mut warnings);
            }
        }
        Self { regime, lambda, rabi, delta, warnings }
    }

    pub fn is_valid(&self) -> bool {
        self.warnings.is_empty()
    }

    /// Approximate concurrence at time `t`, in `[0, 1]`.
    pub fn value(&self, t: f64) -> f64 {
        let (l, r, d) = (self.lambda, self.rabi, self.delta);
        let x = r * r / (d * d) * l * t;
        let v = match self.regime {
            Regime::DispersiveDecaySingle | Regime::FarDetuningSingle => (-x).exp(),
            Regime::DispersiveDecaySymmetric => (-2.0 * x).exp(),
            Regime::DispersiveFactorized => {
                let rad = 1.0 + (-4.0 * x).exp() - 2.0 * (-2.0 * x).exp() * (2.0 * r * r / d * t).cos();
                0.5 * rad.max(0.0).sqrt()
            }
            Regime::BeatsSmallDetuning => {
                let c2 = (r * t).cos().powi(2);
                let rad = 1.0 + (-2.0 * l * t).exp() * c2 * c2 - 2.0 * (-l * t).exp() * c2 * (d * t).cos();
                0.5 * rad.max(0.0).sqrt()
            }
            Regime::SmallDetuningSingle => {
                let (s, c) = (r * t).sin_cos();
                let rad = c * c + (d * d + l * l) / (4.0 * r * r) * s * s + l / r * s * c;
                (-l * t / 2.0).exp() * rad.max(0.0).sqrt()
            }
        };
        if v.is_nan() {
            0.0
        } else {
            v.clamp(0.0, 1.0)
        }
    }
}

/// Approximate concurrence and the list of violated assumptions.
pub fn approx_concurrence(
    t: f64,
    init: &InitialState,
    params: &SystemParams,
    regime: Regime,
) -> (f64, Vec<RegimeWarning>) {
    let model = ApproxModel::new(init, params, regime);
    (model.value(t), model.warnings)
}

/// Discrepancy between an approximate formula and the exact concurrence.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxErrorReport {
    pub regime: Regime,
    /// `max_t |C_approx − C_exact|`.
    pub sup_norm: f64,
    /// `√((1/T)∫(C_approx − C_exact)² dt)` by the trapezoidal rule.
    pub l2: f64,
    /// `argmax C_approx − argmax C_exact` (in time units).
    pub argmax_shift: f64,
    pub warnings: Vec<RegimeWarning>,
}

pub fn approx_error_report(
    params: &SystemParams,
    init: &InitialState,
    regime: Regime,
    grid: &TimeGrid,
) -> Result<ApproxErrorReport> {
    let mut exact = evolve_exact(grid, init, params)?;
    let exact_c = concurrence_trajectory(&mut exact)?.to_vec();
    let model = ApproxModel::new(init, params, regime);
    let approx: Vec<f64> = grid.times().iter().map(|&t| model.value(t)).collect();
    let diff: Vec<f64> = approx.iter().zip(&exact_c).map(|(a, e)| a - e).collect();
    Ok(ApproxErrorReport {
        regime,
        sup_norm: diff.iter().fold(0.0, |m, d| m.max(d.abs())),
        l2: rms(grid.times(), &diff),
        argmax_shift: grid.times()[argmax(&approx)] - grid.times()[argmax(&exact_c)],
        warnings: model.warnings,
    })
}

/// `√((1/T)∫ y² dt)` with the trapezoidal rule.
pub fn rms(times: &[f64], y: &[f64]) -> f64 {
    if times.len() < 2 {
        return y.first().map_or(0.0, |v| v.abs());
    }
    let integral: f64 = times
        .windows(2)
        .zip(y.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] * v[0] + v[1] * v[1]))
        .sum();
    (integral / (times[times.len() - 1] - times[0])).sqrt()
}

pub fn argmax(y: &[f64]) -> usize {
    y.iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) })
        .0
}

/// Large-detuning expansion `Ω ≈ λ(1 − 2ℛ²/δ²) − i(δ + 2ℛ²/δ)`.
pub fn omega_far_detuning(params: &SystemParams) -> C64 {
    let (l, r, d) = (params.lambda, params.rabi, params.delta_1);
    C64::new(l * (1.0 - 2.0 * r * r / (d * d)), -(d + 2.0 * r * r / d))
}
