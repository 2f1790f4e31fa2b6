#![allow(dead_code)]

use cavity_entangler::oracle::{evolve_rk4, evolve_volterra, IntegratorConfig, Method};
use cavity_entangler::*;

pub fn concurrence_of(traj: &Trajectory) -> Vec<f64> {
    let mut t = traj.clone();
    concurrence_trajectory(&mut t).unwrap().to_vec()
}

pub fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `max|a − b| / max(max a, max b)`.
pub fn rel_sup(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().chain(b).cloned().fold(0.0, f64::max);
    sup_diff(a, b) / scale
}

/// Oracle run sampled on the uniform grid `0, spacing, …, t_max` with a step
/// no larger than `dt_max`.
pub fn oracle_on_grid(
    method: Method,
    init: &InitialState,
    p: &SystemParams,
    t_max: f64,
    spacing: f64,
    dt_max: f64,
) -> Trajectory {
    let cfg = IntegratorConfig::aligned(method, t_max, spacing, dt_max);
    match method {
        Method::Rk4 => evolve_rk4(init, p, &cfg),
        Method::VolterraTrapezoid => evolve_volterra(init, p, &cfg),
    }
    .unwrap()
}

pub fn uniform(t_max: f64, spacing: f64) -> TimeGrid {
    TimeGrid::uniform(t_max, (t_max / spacing).round() as usize + 1).unwrap()
}

/// Observed order `log₂(err(h)/err(h/2))` of an oracle against the exact
/// solution at the final time.
pub fn observed_order(method: Method, init: &InitialState, p: &SystemParams, t_max: f64, h: f64) -> f64 {
    let exact = evolve_exact(&TimeGrid::new(vec![0.0, t_max]).unwrap(), init, p).unwrap();
    let err = |dt: f64| {
        let tr = oracle_on_grid(method, init, p, t_max, t_max, dt);
        let k = tr.len() - 1;
        assert!((tr.times[k] - t_max).abs() < 1e-9);
        ((tr.c1[k] - exact.c1[1]).norm_sqr() + (tr.c2[k] - exact.c2[1]).norm_sqr()).sqrt()
    };
    (err(h) / err(h / 2.0)).log2()
}
