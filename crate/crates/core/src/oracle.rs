//! Brute-force integrators used to validate the closed-form and spectral
//! solvers.
//!
//! * [`evolve_rk4`] integrates the cavity-plus-qubits linear system with
//!   fixed-step classical Runge–Kutta.
//! * [`evolve_volterra`] discretizes the memory-kernel equations directly,
//!
//!   ```text
//!   ċ_j(t) = −α_j e^{iδ_j t} ∫₀ᵗ f(t−t₁) Σ_k α_k c_k(t₁) e^{−iδ_k t₁} dt₁,
//!   ```
//!
//!   with the trapezoidal rule for the convolution and for the time step. It
//!   never forms the cavity amplitude, so it checks the pseudomode reduction
//!   rather than reusing it.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::general::generator_matrix;
use crate::linalg::CVector3;
use crate::model::{correlation_function, InitialState, SystemParams, Trajectory};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Rk4,
    VolterraTrapezoid,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub method: Method,
    pub max_time: f64,
    /// Record every `stride`-th step (the final step is always recorded).
    pub stride: usize,
}

impl IntegratorConfig {
    /// Step `1e-3 / max(λ, ℛ, |δ₁|, |δ₂|)`.
    pub fn default_for(params: &SystemParams, method: Method, max_time: f64) -> Self {
        Self {
            dt: 1e-3 / params.fastest_rate(),
            method,
            max_time,
            stride: 1,
        }
    }

    /// Largest admissible step: the fastest scale must be resolved by 100 steps.
    pub fn step_limit(params: &SystemParams) -> f64 {
        1e-2 / params.fastest_rate()
    }

    /// Chooses the largest step not above `dt_max` that puts a step exactly on
    /// every sample of a uniform output grid with spacing `spacing`.
    pub fn aligned(method: Method, max_time: f64, spacing: f64, dt_max: f64) -> Self {
        let per_sample = (spacing / dt_max).ceil().max(1.0) as usize;
        Self {
            dt: spacing / per_sample as f64,
            method,
            max_time,
            stride: per_sample,
        }
    }

    pub fn validate(&self, params: &SystemParams) -> Result<usize> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::StepTooLarge { dt: self.dt, limit: Self::step_limit(params) });
        }
        let limit = Self::step_limit(params);
        if self.dt > limit * (1.0 + 1e-12) {
            return Err(Error::StepTooLarge { dt: self.dt, limit });
        }
        if !(self.max_time > 0.0) || !self.max_time.is_finite() {
            return Err(Error::InvalidGrid(format!("max_time must be positive, got {}", self.max_time)));
        }
        if self.stride == 0 {
            return Err(Error::InvalidGrid("stride must be at least 1".into()));
        }
        Ok((self.max_time / self.dt - 1e-9).ceil().max(1.0) as usize)
    }
}

/// Fixed-step RK4 on `(ĉ₁, ĉ₂, b)`; the trajectory includes `b(t)`.
///
/// The step count is `⌈max_time/dt⌉`; the actual step is shrunk so the last
/// step lands exactly on `max_time`.
pub fn evolve_rk4(init: &InitialState, params: &SystemParams, config: &IntegratorConfig) -> Result<Trajectory> {
    let n_steps = config.validate(params)?;
    let h = config.max_time / n_steps as f64;
    let m = generator_matrix(params).m;
    let mut x = CVector3::new(init.c01, init.c02, C64::new(0.0, 0.0));
    let mut traj = Trajectory::with_capacity(n_steps / config.stride + 2, true);
    let record = |traj: &mut Trajectory, t: f64, x: &CVector3| {
        traj.times.push(t);
        traj.c1.push(x[0] * C64::from_polar(1.0, params.delta_1 * t));
        traj.c2.push(x[1] * C64::from_polar(1.0, params.delta_2 * t));
        traj.b.as_mut().unwrap().push(x[2]);
    };
    record(&mut traj, 0.0, &x);
    let half = C64::new(h / 2.0, 0.0);
    let full = C64::new(h, 0.0);
    let sixth = C64::new(h / 6.0, 0.0);
    for step in 1..=n_steps {
        let k1 = m * x;
        let k2 = m * (x + k1 * half);
        let k3 = m * (x + k2 * half);
        let k4 = m * (x + k3 * full);
        x += (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * sixth;
        if step % config.stride == 0 || step == n_steps {
            record(&mut traj, step as f64 * h, &x);
        }
    }
    Ok(traj)
}

/// Trapezoidal Volterra solver with the reservoir correlation function as kernel.
pub fn evolve_volterra(init: &InitialState, params: &SystemParams, config: &IntegratorConfig) -> Result<Trajectory> {
    let n_steps = config.validate(params)?;
    let l = params.lambda;
    let w2 = params.w_weight * params.w_weight;
    let h = config.max_time / n_steps as f64;
    let decay = (-l * h).exp();
    let mut history = ExpHistory { acc: C64::new(0.0, 0.0), decay };
    volterra_core(init, params, config, w2, |_, s_prev, w_prev| {
        // Σ_{i≤n} w_i f(t_{n+1} − t_i) S_i / W², updated in O(1).
        history.acc = (history.acc + s_prev * w_prev) * history.decay;
        history.acc * w2
    })
}

/// Same discretization as [`evolve_volterra`] but with an arbitrary kernel and
/// the history sum evaluated term by term in O(N²). Used to check the O(N)
/// recursion and to run non-exponential kernels.
pub fn evolve_volterra_with_kernel<K>(
    init: &InitialState,
    params: &SystemParams,
    config: &IntegratorConfig,
    kernel: K,
) -> Result<Trajectory>
where
    K: Fn(f64) -> f64,
{
    let n_steps = config.validate(params)?;
    let h = config.max_time / n_steps as f64;
    let weights: Vec<f64> = (0..=n_steps).map(|k| kernel(k as f64 * h)).collect();
    volterra_core(init, params, config, weights[0], |state, _, _| {
        let n1 = state.len();
        state
            .iter()
            .enumerate()
            .map(|(i, s)| *s * (weights[n1 - i] * if i == 0 { 0.5 } else { 1.0 }))
            .sum()
    })
}

struct ExpHistory {
    acc: C64,
    decay: f64,
}

/// Shared trapezoidal stepper. `history(S, S_n, w_n)` must return
/// `Σ_{i=0}^{n} w_i f(t_{n+1} − t_i) S_i` given the source values
/// `S_0..S_n`, the newest source and its quadrature weight.
fn volterra_core<H>(
    init: &InitialState,
    params: &SystemParams,
    config: &IntegratorConfig,
    f0: f64,
    mut history: H,
) -> Result<Trajectory>
where
    H: FnMut(&[C64], C64, f64) -> C64,
{
    let n_steps = config.validate(params)?;
    let h = config.max_time / n_steps as f64;
    let alpha = [params.alpha_1, params.alpha_2];
    let delta = [params.delta_1, params.delta_2];
    let alpha_t2 = alpha[0] * alpha[0] + alpha[1] * alpha[1];
    let phase = |j: usize, t: f64| C64::from_polar(1.0, delta[j] * t);

    // Source S(t) = Σ_k α_k c_k(t) e^{−iδ_k t}.
    let source = |c: &[C64; 2], t: f64| c[0] * phase(0, t).conj() * alpha[0] + c[1] * phase(1, t).conj() * alpha[1];

    let mut c = [init.c01, init.c02];
    let mut sources = vec![source(&c, 0.0)];
    // ċ at t = 0 vanishes: the convolution is over an empty interval.
    let mut deriv = [C64::new(0.0, 0.0); 2];

    let kappa = h * h * f0 / 4.0;
    let mut traj = Trajectory::with_capacity(n_steps / config.stride + 2, false);
    traj.times.push(0.0);
    traj.c1.push(c[0]);
    traj.c2.push(c[1]);

    for step in 1..=n_steps {
        let t = step as f64 * h;
        let newest = *sources.last().unwrap();
        let w_newest = if step == 1 { 0.5 } else { 1.0 };
        let hist = history(&sources, newest, w_newest);
        // c_{n+1} = c_n + h/2 (F_n + F_{n+1}),
        // F_{n+1,j} = −α_j e^{iδ_j t} h (hist + f(0) S_{n+1} / 2).
        let p = [phase(0, t) * alpha[0], phase(1, t) * alpha[1]];
        let q = [phase(0, t).conj() * alpha[0], phase(1, t).conj() * alpha[1]];
        let mut rhs = [C64::new(0.0, 0.0); 2];
        for j in 0..2 {
            rhs[j] = c[j] + deriv[j] * (h / 2.0) - p[j] * hist * (h * h / 2.0);
        }
        // Solve (I + κ p qᵀ) c = rhs with Sherman–Morrison; qᵀp = α_T².
        let q_rhs = q[0] * rhs[0] + q[1] * rhs[1];
        let corr = q_rhs * kappa / (1.0 + kappa * alpha_t2);
        for j in 0..2 {
            c[j] = rhs[j] - p[j] * corr;
        }
        let s_new = source(&c, t);
        for j in 0..2 {
            deriv[j] = -p[j] * (hist + s_new * (f0 / 2.0)) * h;
        }
        sources.push(s_new);
        if step % config.stride == 0 || step == n_steps {
            traj.times.push(t);
            traj.c1.push(c[0]);
            traj.c2.push(c[1]);
        }
    }
    Ok(traj)
}

/// Kernel built from [`correlation_function`], for use with
/// [`evolve_volterra_with_kernel`].
pub fn reservoir_kernel(params: &SystemParams) -> impl Fn(f64) -> f64 + '_ {
    move |tau| correlation_function(tau, params).map(|z| z.re).unwrap_or(0.0)
}

/// Largest per-step increase of `|ĉ₁|² + |ĉ₂|² + |b|²` along a trajectory
/// (negative or zero for a dissipative evolution).
pub fn max_norm_increase(traj: &Trajectory) -> Option<f64> {
    let norms = traj.total_norm()?;
    Some(norms.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn config(p: &SystemParams, method: Method, t: f64) -> IntegratorConfig {
        IntegratorConfig::default_for(p, method, t)
    }

    #[test]
    fn step_limit_is_enforced() {
        let p = SystemParams::from_detunings(1.0, 10.0, 0.7, 0.7, 0.5).unwrap();
        let mut cfg = config(&p, Method::Rk4, 1.0);
        cfg.dt = 0.01;
        let init = InitialState::from_s_phi(1.0, 0.0).unwrap();
        assert!(matches!(evolve_rk4(&init, &p, &cfg), Err(Error::StepTooLarge { .. })));
        assert!(matches!(evolve_volterra(&init, &p, &cfg), Err(Error::StepTooLarge { .. })));
        cfg.dt = 1e-3;
        assert!(evolve_rk4(&init, &p, &cfg).is_ok());
    }

    #[test]
    fn decoupled_amplitudes_are_constant() {
        let p = SystemParams::from_detunings(1.0, 0.0, 0.4, -0.9, 0.5).unwrap();
        let init = InitialState::from_s_phi(0.2, 0.7).unwrap();
        let rk = evolve_rk4(&init, &p, &config(&p, Method::Rk4, 5.0)).unwrap();
        for (a, b) in rk.c1.iter().zip(&rk.c2) {
            assert!((a.norm() - init.c01.norm()).abs() < 1e-10);
            assert!((b.norm() - init.c02.norm()).abs() < 1e-10);
        }
        let vo = evolve_volterra(&init, &p, &config(&p, Method::VolterraTrapezoid, 5.0)).unwrap();
        for (a, b) in vo.c1.iter().zip(&vo.c2) {
            assert!((a - init.c01).norm() < 1e-14);
            assert!((b - init.c02).norm() < 1e-14);
        }
    }

    #[test]
    fn dark_state_survives_rk4() {
        let p = SystemParams::from_detunings(1.0, 1.0, 0.3, 0.3, 0.6).unwrap();
        let init = InitialState::psi_minus(&p);
        let rk = evolve_rk4(&init, &p, &config(&p, Method::Rk4, 10.0)).unwrap();
        for (a, b) in rk.c1.iter().zip(&rk.c2) {
            assert!((a - init.c01).norm() < 1e-8);
            assert!((b - init.c02).norm() < 1e-8);
        }
    }

    #[test]
    fn stride_and_final_time() {
        let p = SystemParams::from_detunings(1.0, 0.5, 0.0, 0.0, FRAC_1_SQRT_2).unwrap();
        let cfg = IntegratorConfig { dt: 1e-3, method: Method::Rk4, max_time: 1.0, stride: 100 };
        let traj = evolve_rk4(&InitialState::from_s_phi(1.0, 0.0).unwrap(), &p, &cfg).unwrap();
        assert_eq!(traj.len(), 11);
        assert!((traj.times[10] - 1.0).abs() < 1e-15);
        assert!((traj.times[3] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn aligned_config_hits_grid() {
        let cfg = IntegratorConfig::aligned(Method::Rk4, 2.0, 0.01, 1e-4);
        assert_eq!(cfg.stride, 100);
        assert!((cfg.dt - 1e-4).abs() < 1e-18);
        let cfg = IntegratorConfig::aligned(Method::Rk4, 2.0, 0.01, 3e-4);
        assert_eq!(cfg.stride, 34);
        assert!(cfg.dt <= 3e-4);
    }

    #[test]
    fn recursive_history_matches_direct_sum() {
        let p = SystemParams::from_detunings(1.0, 1.5, -0.5, 0.9, 0.6).unwrap();
        let init = InitialState::from_s_phi(0.3, 0.4).unwrap();
        let cfg = IntegratorConfig { dt: 2e-3, method: Method::VolterraTrapezoid, max_time: 2.0, stride: 10 };
        let fast = evolve_volterra(&init, &p, &cfg).unwrap();
        let slow = evolve_volterra_with_kernel(&init, &p, &cfg, reservoir_kernel(&p)).unwrap();
        assert!(fast.sup_distance(&slow) < 1e-12);
    }
}
