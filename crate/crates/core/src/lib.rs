//! Entanglement dynamics of two qubits sharing a lossy cavity mode with a
//! Lorentzian spectral density, in the single-excitation sector.
//!
//! The exact solution uses the pseudomode picture: the qubit amplitudes and
//! one damped bosonic mode evolve under a 3×3 non-Hermitian generator.
//! Independent time-steppers in [`oracle`] cross-check it.

pub mod dispersive;
pub mod entanglement;
pub mod error;
pub mod general;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod spectrum;
pub mod subradiant;

pub use num_complex::Complex64 as C64;

pub use entanglement::{concurrence, concurrence_trajectory, density_matrix, stationary_concurrence};
pub use error::{Error, Result};
pub use general::{evolve_exact, Qubit};
pub use model::{correlation_function, spectral_density, InitialState, SystemParams, TimeGrid, Trajectory};
pub use oracle::{evolve_rk4, evolve_volterra, IntegratorConfig, Method};
