//! Exact dynamics for arbitrary qubit frequencies.
//!
//! Because the reservoir memory kernel is a single exponential, the two
//! integro-differential amplitude equations are equivalent to a closed linear
//! system for `(ĉ₁, ĉ₂, b)`, where `ĉ_j = c_j e^{−iδ_j t}` and `b` is the
//! collective cavity amplitude:
//!
//! ```text
//! d/dt (ĉ₁, ĉ₂, b)ᵀ = M (ĉ₁, ĉ₂, b)ᵀ,
//! M = [[−iδ₁, 0, −iWα₁], [0, −iδ₂, −iWα₂], [−iWα₁, −iWα₂, −λ]].
//! ```
//!
//! The solver exponentiates `M` through its eigen-decomposition. The cubic
//! characteristic equation from the Laplace-domain treatment is exposed as an
//! independent consistency surface: its roots equal the eigenvalues of `M`
//! shifted by `iδ_j`.

use std::cmp::Ordering;

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::linalg::{eigenvalues3, expm3, CMatrix3, CVector3, Eigen3};
use crate::model::{InitialState, SystemParams, TimeGrid, Trajectory};

/// Relative eigenvalue gap below which the spectral route is abandoned.
pub const DEGENERACY_RTOL: f64 = 1e-6;

/// The 3×3 generator over `(ĉ₁, ĉ₂, b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudomodeGenerator {
    pub m: CMatrix3,
}

impl PseudomodeGenerator {
    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn eigenvalues(&self) -> [C64; 3] {
        eigenvalues3(&self.m)
    }

    /// Largest real part of the spectrum.
    pub fn spectral_abscissa(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn generator_matrix(params: &SystemParams) -> PseudomodeGenerator {
    let i = C64::i();
    let zero = C64::new(0.0, 0.0);
    let g1 = -i * (params.w_weight * params.alpha_1);
    let g2 = -i * (params.w_weight * params.alpha_2);
    PseudomodeGenerator {
        m: CMatrix3::new(
            -i * params.delta_1, zero, g1,
            zero, -i * params.delta_2, g2,
            g1, g2, C64::new(-params.lambda, 0.0),
        ),
    }
}

/// Propagator `e^{Mt}`, computed once per parameter set and shared across
/// time points.
#[derive(Clone, Debug)]
pub struct Propagator {
    generator: CMatrix3,
    eigen: Option<Eigen3>,
}

impl Propagator {
    pub fn new(params: &SystemParams) -> Self {
        let generator = generator_matrix(params).m;
        let eigen = Eigen3::new(&generator, DEGENERACY_RTOL);
        Self { generator, eigen }
    }

    /// Whether the spectral route is in use (false near exceptional points).
    pub fn is_spectral(&self) -> bool {
        self.eigen.is_some()
    }

    pub fn apply(&self, t: f64, x0: &CVector3) -> CVector3 {
        match &self.eigen {
            Some(e) => e.apply_exp(t, x0),
            None => expm3(&(self.generator * C64::new(t, 0.0))) * x0,
        }
    }
}

/// Exact trajectory, including the pseudomode amplitude `b(t)`.
pub fn evolve_exact(grid: &TimeGrid, init: &InitialState, params: &SystemParams) -> Result<Trajectory> {
    let prop = Propagator::new(params);
    let x0 = CVector3::new(init.c01, init.c02, C64::new(0.0, 0.0));
    let mut traj = Trajectory::with_capacity(grid.len(), true);
    for &t in grid.times() {
        let x = prop.apply(t, &x0);
        traj.times.push(t);
        traj.c1.push(x[0] * C64::from_polar(1.0, params.delta_1 * t));
        traj.c2.push(x[1] * C64::from_polar(1.0, params.delta_2 * t));
        traj.b.as_mut().unwrap().push(x[2]);
    }
    Ok(traj)
}

/// Which qubit's Laplace-domain cubic to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Qubit {
    One,
    Two,
}

/// Monic cubic `s³ + A s² + B s + C` with its roots.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicCoefficients {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub roots: [C64; 3],
}

impl CubicCoefficients {
    pub fn eval(&self, s: C64) -> C64 {
        ((s + self.a) * s + self.b) * s + self.c
    }
}

/// Coefficients of the characteristic cubic for qubit `j`:
///
/// ```text
/// A_j = λ + i(δ_k − 2δ_j)
/// B_j = ℛ² − δ_j² + δ₁δ₂ + i(δ_k − δ_j)λ
/// C_j = iℛ² r_j² (δ_k − δ_j)
/// ```
///
/// with `k` the other qubit.
pub fn cubic_coefficients(params: &SystemParams, qubit: Qubit) -> CubicCoefficients {
    let (dj, dk, rj) = match qubit {
        Qubit::One => (params.delta_1, params.delta_2, params.r_1),
        Qubit::Two => (params.delta_2, params.delta_1, params.r_2),
    };
    let l = params.lambda;
    let r2 = params.rabi * params.rabi;
    let a = C64::new(l, dk - 2.0 * dj);
    let b = C64::new(r2 - dj * dj + params.delta_1 * params.delta_2, (dk - dj) * l);
    let c = C64::new(0.0, r2 * rj * rj * (dk - dj));
    CubicCoefficients { a, b, c, roots: cubic_roots(a, b, c) }
}

/// Descending real part, ties broken by ascending imaginary part.
pub fn root_order(x: &C64, y: &C64) -> Ordering {
    y.re.total_cmp(&x.re).then(x.im.total_cmp(&y.im))
}

/// Sorts with [`root_order`] after snapping real parts to a grid of
/// `1e-12·max(1, |s|max)`, so rounding noise cannot split a genuine tie.
pub fn sort_roots(roots: &mut [C64]) {
    let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let q = 1e-12 * scale;
    roots.sort_by(|x, y| {
        let kx = (x.re / q).round();
        let ky = (y.re / q).round();
        ky.total_cmp(&kx).then(x.im.total_cmp(&y.im))
    });
}

/// Roots of `s³ + a s² + b s + c`: companion-matrix eigenvalues followed by
/// one Newton polish per root.
pub fn cubic_roots(a: C64, b: C64, c: C64) -> [C64; 3] {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let companion = CMatrix3::new(
        zero, zero, -c,
        one, zero, -b,
        zero, one, -a,
    );
    let p = |s: C64| ((s + a) * s + b) * s + c;
    let dp = |s: C64| (s * 3.0 + a * 2.0) * s + b;
    let mut roots = eigenvalues3(&companion);
    for r in roots.iter_mut() {
        let d = dp(*r);
        if d.norm() > 0.0 {
            let polished = *r - p(*r) / d;
            if polished.is_finite() && p(polished).norm() <= p(*r).norm() {
                *r = polished;
            }
        }
    }
    sort_roots(&mut roots);
    roots
}
