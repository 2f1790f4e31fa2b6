//! Closed-form dynamics for equal qubit frequencies.
//!
//! With `δ₁ = δ₂ = δ` the subradiant state `ψ₋ = r₂|10⟩ − r₁|01⟩` decouples
//! from the cavity and only the superradiant state `ψ₊ = r₁|10⟩ + r₂|01⟩`
//! evolves, with survival amplitude
//!
//! ```text
//! E(t) = e^{−(λ−iδ)t/2} [cosh(Ωt/2) + (λ−iδ)/Ω · sinh(Ωt/2)],
//! Ω    = √(λ² − Ω_R² − 2iδλ).
//! ```

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{InitialState, SystemParams, TimeGrid, Trajectory};

/// Overlaps of an initial state with the super- and subradiant states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuperSubDecomposition {
    pub beta_plus: C64,
    pub beta_minus: C64,
}

/// `(1 − e^{−z t})/z`, continuous through `z = 0`.
fn one_minus_exp_over(z: C64, t: f64) -> C64 {
    let x = z * t;
    if x.norm() < 1e-4 {
        // t·(1 − x/2 + x²/6 − x³/24)
        C64::new(t, 0.0) * (C64::new(1.0, 0.0) - x / 2.0 + x * x / 6.0 - x * x * x / 24.0)
    } else {
        (C64::new(1.0, 0.0) - (-x).exp()) / z
    }
}

/// `Ω` on the principal branch (`Re Ω ≥ 0`).
pub fn omega(params: &SystemParams) -> Result<C64> {
    let d = params.common_detuning()?;
    let l = params.lambda;
    let r = params.rabi;
    Ok(C64::new(l * l - 4.0 * r * r - d * d, -2.0 * d * l).sqrt())
}

/// Survival amplitude `E(t)` of the superradiant state.
///
/// Evaluated as `½ e^{(Ω−a)t/2} [(1 + e^{−Ωt}) + a·(1 − e^{−Ωt})/Ω]` with
/// `a = λ − iδ`, which never overflows because `Re Ω ≤ λ` on the principal
/// branch, and stays finite at the exceptional point `Ω = 0`.
pub fn survival_amplitude(t: f64, params: &SystemParams) -> Result<C64> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let om = omega(params)?;
    let d = params.delta_1;
    let a = C64::new(params.lambda, -d);
    Ok(survival_with(t, a, om))
}

fn survival_with(t: f64, a: C64, om: C64) -> C64 {
    if t == 0.0 {
        return C64::new(1.0, 0.0);
    }
    let decay = ((om - a) * (t / 2.0)).exp();
    let e_neg = (-om * t).exp();
    decay * 0.5 * (C64::new(1.0, 0.0) + e_neg + a * one_minus_exp_over(om, t))
}

/// Closed-form amplitudes `(c₁(t), c₂(t))`.
pub fn amplitudes_subradiant(t: f64, init: &InitialState, params: &SystemParams) -> Result<(C64, C64)> {
    let e = survival_amplitude(t, params)?;
    Ok(combine(e, init, params))
}

fn combine(e: C64, init: &InitialState, p: &SystemParams) -> (C64, C64) {
    let (r1, r2) = (p.r_1, p.r_2);
    let one = C64::new(1.0, 0.0);
    let cross = (one - e) * (r1 * r2);
    let c1 = (e * (r1 * r1) + r2 * r2) * init.c01 - cross * init.c02;
    let c2 = -cross * init.c01 + (e * (r2 * r2) + r1 * r1) * init.c02;
    (c1, c2)
}

/// `β± = ⟨ψ±|ψ(0)⟩`.
pub fn decompose_super_sub(init: &InitialState, params: &SystemParams) -> Result<SuperSubDecomposition> {
    params.common_detuning()?;
    let (r1, r2) = (params.r_1, params.r_2);
    Ok(SuperSubDecomposition {
        beta_plus: init.c01 * r1 + init.c02 * r2,
        beta_minus: init.c01 * r2 - init.c02 * r1,
    })
}

/// Long-time limit `(r₂β₋, −r₁β₋)`: the trapped subradiant component.
pub fn asymptotic_amplitudes(init: &InitialState, params: &SystemParams) -> Result<(C64, C64)> {
    let dec = decompose_super_sub(init, params)?;
    if params.rabi == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    Ok((dec.beta_minus * params.r_2, -dec.beta_minus * params.r_1))
}

/// Closed-form trajectory on a grid.
pub fn evolve_subradiant(grid: &TimeGrid, init: &InitialState, params: &SystemParams) -> Result<Trajectory> {
    let om = omega(params)?;
    let a = C64::new(params.lambda, -params.delta_1);
    let mut traj = Trajectory::with_capacity(grid.len(), false);
    for &t in grid.times() {
        let (c1, c2) = combine(survival_with(t, a, om), init, params);
        traj.times.push(t);
        traj.c1.push(c1);
        traj.c2.push(c2);
    }
    Ok(traj)
}
