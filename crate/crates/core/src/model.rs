//! Physical parameters, the Lorentzian reservoir, initial states and
//! trajectories.
//!
//! Rates and frequencies are stored in whatever unit the caller supplies;
//! the natural unit is the cavity linewidth λ, and [`SystemParams::normalized`]
//! rescales a parameter set so that λ = 1. Only the detunings
//! `δ_j = ω_j − ω_c` enter the dynamics; the absolute cavity frequency is kept
//! for bookkeeping.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance used when deciding that the two qubit frequencies coincide.
pub const EQUAL_DETUNING_RTOL: f64 = 1e-12;

/// Two qubits coupled to a single Lorentzian reservoir.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SystemParams {
    pub lambda: f64,
    pub w_weight: f64,
    pub omega_c: f64,
    pub omega_1: f64,
    pub omega_2: f64,
    pub alpha_1: f64,
    pub alpha_2: f64,
    pub delta_1: f64,
    pub delta_2: f64,
    pub delta_21: f64,
    pub alpha_t: f64,
    pub r_1: f64,
    pub r_2: f64,
    /// Vacuum Rabi frequency `W·α_T`.
    pub rabi: f64,
}

impl SystemParams {
    pub fn new(
        omega_1: f64,
        omega_2: f64,
        omega_c: f64,
        lambda: f64,
        w_weight: f64,
        alpha_1: f64,
        alpha_2: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("omega_1", omega_1),
            ("omega_2", omega_2),
            ("omega_c", omega_c),
            ("lambda", lambda),
            ("w_weight", w_weight),
            ("alpha_1", alpha_1),
            ("alpha_2", alpha_2),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        if lambda <= 0.0 {
            return Err(Error::NonPositiveLinewidth(lambda));
        }
        if w_weight < 0.0 {
            return Err(Error::NegativeWeight(w_weight));
        }
        let alpha_t = alpha_1.hypot(alpha_2);
        if alpha_t == 0.0 {
            return Err(Error::ZeroCoupling);
        }
        let delta_1 = omega_1 - omega_c;
        let delta_2 = omega_2 - omega_c;
        Ok(Self {
            lambda,
            w_weight,
            omega_c,
            omega_1,
            omega_2,
            alpha_1,
            alpha_2,
            delta_1,
            delta_2,
            delta_21: delta_2 - delta_1,
            alpha_t,
            r_1: alpha_1 / alpha_t,
            r_2: alpha_2 / alpha_t,
            rabi: w_weight * alpha_t,
        })
    }

    /// Builds parameters from the quantities the dynamics depends on:
    /// linewidth, vacuum Rabi frequency, the two detunings and `r_1 ∈ [0, 1]`
    /// (with `r_2 = √(1 − r_1²)`). The cavity sits at zero frequency.
    pub fn from_detunings(lambda: f64, rabi: f64, delta_1: f64, delta_2: f64, r_1: f64) -> Result<Self> {
        if !r_1.is_finite() {
            return Err(Error::NonFinite("r_1"));
        }
        if !(0.0..=1.0).contains(&r_1) {
            return Err(Error::OutOfRangeCoupling(r_1));
        }
        let r_2 = (1.0 - r_1 * r_1).max(0.0).sqrt();
        Self::new(delta_1, delta_2, 0.0, lambda, rabi, r_1, r_2)
    }

    /// Same parameters with every rate divided by λ, so that λ = 1 and times
    /// are measured in units of 1/λ.
    pub fn normalized(&self) -> Self {
        let l = self.lambda;
        Self {
            lambda: 1.0,
            w_weight: self.w_weight / l,
            omega_c: self.omega_c / l,
            omega_1: self.omega_1 / l,
            omega_2: self.omega_2 / l,
            delta_1: self.delta_1 / l,
            delta_2: self.delta_2 / l,
            delta_21: self.delta_21 / l,
            rabi: self.rabi / l,
            ..*self
        }
    }

    /// `ℛ/λ`: below one is the bad-cavity side, above one the good-cavity side.
    pub fn rabi_ratio(&self) -> f64 {
        self.rabi / self.lambda
    }

    /// True when the qubit frequencies coincide, so a decoherence-free state exists.
    pub fn has_equal_detunings(&self) -> bool {
        let scale = self.lambda.max(self.delta_1.abs()).max(self.delta_2.abs());
        self.delta_21.abs() < EQUAL_DETUNING_RTOL * scale
    }

    /// The common detuning, or `ScenarioMismatch` when the qubits differ.
    pub fn common_detuning(&self) -> Result<f64> {
        if self.has_equal_detunings() {
            Ok(self.delta_1)
        } else {
            Err(Error::ScenarioMismatch(self.delta_21))
        }
    }

    /// Generalized Rabi frequency `Ω_R = √(4ℛ² + δ²)`; defined only for equal detunings.
    pub fn gen_rabi(&self) -> Option<f64> {
        self.common_detuning()
            .ok()
            .map(|d| (4.0 * self.rabi * self.rabi + d * d).sqrt())
    }

    /// Largest rate in the problem; sets the integration step scale.
    pub fn fastest_rate(&self) -> f64 {
        self.lambda
            .max(self.rabi)
            .max(self.delta_1.abs())
            .max(self.delta_2.abs())
    }
}

/// Lorentzian spectral density `J(ω) = (W²/π)·λ/((ω−ω_c)² + λ²)`.
pub fn spectral_density(omega: f64, params: &SystemParams) -> f64 {
    let x = omega - params.omega_c;
    let l = params.lambda;
    params.w_weight * params.w_weight / PI * l / (x * x + l * l)
}

/// Reservoir correlation function `f(τ) = W²·e^{−λτ}`, the Fourier transform
/// of [`spectral_density`] in the frame rotating at the cavity frequency.
pub fn correlation_function(tau: f64, params: &SystemParams) -> Result<C64> {
    if tau < 0.0 {
        return Err(Error::NegativeLag(tau));
    }
    let w2 = params.w_weight * params.w_weight;
    Ok(C64::new(w2 * (-params.lambda * tau).exp(), 0.0))
}

/// Single-excitation qubit state `c01|10⟩ + c02|01⟩` with the reservoir in vacuum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialState {
    pub c01: C64,
    pub c02: C64,
}

impl InitialState {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(c01: C64, c02: C64) -> Result<Self> {
        if !(c01.is_finite() && c02.is_finite()) {
            return Err(Error::NonFinite("initial amplitudes"));
        }
        let norm = c01.norm_sqr() + c02.norm_sqr();
        if (norm - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { c01, c02 })
    }

    /// `c01 = √((1−s)/2)`, `c02 = √((1+s)/2)·e^{iφ}`; the initial concurrence
    /// is `√(1 − s²)`.
    pub fn from_s_phi(s: f64, phi: f64) -> Result<Self> {
        if !s.is_finite() || !phi.is_finite() {
            return Err(Error::NonFinite("s/phi"));
        }
        if !(-1.0..=1.0).contains(&s) {
            return Err(Error::OutOfRangeSeparability(s));
        }
        Ok(Self {
            c01: C64::new(((1.0 - s) / 2.0).sqrt(), 0.0),
            c02: C64::from_polar(((1.0 + s) / 2.0).sqrt(), phi),
        })
    }

    /// Subradiant state `r_2|10⟩ − r_1|01⟩`.
    pub fn psi_minus(params: &SystemParams) -> Self {
        Self {
            c01: C64::new(params.r_2, 0.0),
            c02: C64::new(-params.r_1, 0.0),
        }
    }

    /// Superradiant state `r_1|10⟩ + r_2|01⟩`.
    pub fn psi_plus(params: &SystemParams) -> Self {
        Self {
            c01: C64::new(params.r_1, 0.0),
            c02: C64::new(params.r_2, 0.0),
        }
    }
}

/// Validated time grid: `times[0] = 0`, strictly increasing, finite.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid(Vec<f64>);

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidGrid("empty".into()));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidGrid(format!("first time is {}, expected 0", times[0])));
        }
        if let Some(w) = times.windows(2).find(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return Err(Error::InvalidGrid(format!("not strictly increasing at {} -> {}", w[0], w[1])));
        }
        Ok(Self(times))
    }

    /// `n_points` equally spaced times covering `[0, t_max]`.
    pub fn uniform(t_max: f64, n_points: usize) -> Result<Self> {
        if n_points < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {n_points}")));
        }
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(Error::InvalidGrid(format!("t_max must be positive, got {t_max}")));
        }
        let last = (n_points - 1) as f64;
        let times = (0..n_points).map(|k| t_max * k as f64 / last).collect();
        Self::new(times)
    }

    pub fn times(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        *self.0.last().expect("grid is never empty")
    }

    /// Constant spacing if the grid is uniform to 1e-9 relative.
    pub fn uniform_step(&self) -> Option<f64> {
        if self.0.len() < 2 {
            return None;
        }
        let h = self.t_max() / (self.0.len() - 1) as f64;
        self.0
            .iter()
            .enumerate()
            .all(|(k, &t)| (t - h * k as f64).abs() <= 1e-9 * self.t_max())
            .then_some(h)
    }
}

impl AsRef<[f64]> for TimeGrid {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Amplitudes sampled on a time grid.
///
/// `c1`, `c2` are the slowly varying qubit amplitudes of the single-excitation
/// ansatz; `b`, when present, is the collective cavity (pseudomode) amplitude
/// in the frame rotating at the cavity frequency.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub c1: Vec<C64>,
    pub c2: Vec<C64>,
    pub b: Option<Vec<C64>>,
    pub concurrence: Option<Vec<f64>>,
}

impl Trajectory {
    pub fn with_capacity(n: usize, with_pseudomode: bool) -> Self {
        Self {
            times: Vec::with_capacity(n),
            c1: Vec::with_capacity(n),
            c2: Vec::with_capacity(n),
            b: with_pseudomode.then(|| Vec::with_capacity(n)),
            concurrence: None,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `|c1|² + |c2|²` at each sample.
    pub fn qubit_norm(&self) -> Vec<f64> {
        self.c1
            .iter()
            .zip(&self.c2)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .collect()
    }

    /// `|c1|² + |c2|² + |b|²`, the total excitation probability; `None` without `b`.
    pub fn total_norm(&self) -> Option<Vec<f64>> {
        let b = self.b.as_ref()?;
        Some(
            self.qubit_norm()
                .into_iter()
                .zip(b)
                .map(|(q, b)| q + b.norm_sqr())
                .collect(),
        )
    }

    /// Largest pointwise deviation `max_t max(|Δc1|, |Δc2|)` from another
    /// trajectory on the same grid.
    pub fn sup_distance(&self, other: &Trajectory) -> f64 {
        assert_eq!(self.len(), other.len(), "trajectories sampled on different grids");
        self.c1
            .iter()
            .zip(&other.c1)
            .chain(self.c2.iter().zip(&other.c2))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
