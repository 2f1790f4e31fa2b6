//! Reduced two-qubit state and concurrence.

use nalgebra::Matrix4;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{InitialState, SystemParams, Trajectory};
use crate::subradiant::decompose_super_sub;

/// Amplitude pairs whose norm exceeds one by more than this are rejected.
pub const SUPERNORMAL_TOL: f64 = 1e-9;

/// Two-qubit density matrix in the basis `{|11⟩, |10⟩, |01⟩, |00⟩}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedDensityMatrix {
    pub m: Matrix4<C64>,
}

impl ReducedDensityMatrix {
    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn ground_population(&self) -> f64 {
        self.m[(3, 3)].re
    }

    pub fn coherence(&self) -> C64 {
        self.m[(1, 2)]
    }
}

fn check_norm(c1: C64, c2: C64) -> Result<f64> {
    let norm = c1.norm_sqr() + c2.norm_sqr();
    if !norm.is_finite() {
        return Err(Error::NonFinite("amplitudes"));
    }
    if norm > 1.0 + SUPERNORMAL_TOL {
        return Err(Error::SupernormalState(norm));
    }
    Ok(norm)
}

pub fn density_matrix(c1: C64, c2: C64) -> Result<ReducedDensityMatrix> {
    let norm = check_norm(c1, c2)?;
    let mut m = Matrix4::zeros();
    m[(1, 1)] = C64::new(c1.norm_sqr(), 0.0);
    m[(1, 2)] = c1 * c2.conj();
    m[(2, 1)] = c1.conj() * c2;
    m[(2, 2)] = C64::new(c2.norm_sqr(), 0.0);
    m[(3, 3)] = C64::new(1.0 - norm, 0.0);
    Ok(ReducedDensityMatrix { m })
}

/// `C = 2|c₁ c₂*|`.
pub fn concurrence(c1: C64, c2: C64) -> Result<f64> {
    check_norm(c1, c2)?;
    Ok((2.0 * c1.norm() * c2.norm()).min(1.0))
}

/// Fills and returns the concurrence series of a trajectory.
pub fn concurrence_trajectory(traj: &mut Trajectory) -> Result<&[f64]> {
    let series = traj
        .c1
        .iter()
        .zip(&traj.c2)
        .map(|(&a, &b)| concurrence(a, b))
        .collect::<Result<Vec<_>>>()?;
    traj.concurrence = Some(series);
    Ok(traj.concurrence.as_deref().unwrap())
}

/// Long-time concurrence: `2r₁r₂|β₋|²` when the qubit frequencies coincide
/// (the trapped subradiant part), zero otherwise. With no coupling to the
/// cavity nothing decays and the initial concurrence is kept.
pub fn stationary_concurrence(init: &InitialState, params: &SystemParams) -> f64 {
    if params.rabi == 0.0 {
        return 2.0 * init.c01.norm() * init.c02.norm();
    }
    match decompose_super_sub(init, params) {
        Ok(dec) => 2.0 * params.r_1 * params.r_2 * dec.beta_minus.norm_sqr(),
        Err(_) => 0.0,
    }
}
