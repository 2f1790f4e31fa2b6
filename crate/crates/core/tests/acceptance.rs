//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cavity_entangler::dispersive::{approx_error_report, dressed_spectrum, lossless_hamiltonian, Regime};
use cavity_entangler::general::{cubic_coefficients, generator_matrix};
use cavity_entangler::oracle::{max_norm_increase, IntegratorConfig, Method};
use cavity_entangler::spectrum::analyze_beats;
use cavity_entangler::subradiant::evolve_subradiant;
use cavity_entangler::*;
use common::*;
use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn eq(lambda: f64, rabi: f64, d: f64, r1: f64) -> SystemParams {
    SystemParams::from_detunings(lambda, rabi, d, d, r1).unwrap()
}

fn peak(p: &SystemParams, init: &InitialState, t_max: f64) -> (f64, f64) {
    let grid = uniform(t_max, 1.0);
    let c = concurrence_of(&evolve_exact(&grid, init, p).unwrap());
    let k = cavity_entangler::dispersive::argmax(&c);
    (c[k], grid.times()[k])
}

fn c1_dispersive_peak_value() -> Outcome {
    let p = eq(1.0, 0.1, 10.0, 3f64.sqrt() / 2.0);
    let init = InitialState::from_s_phi(1.0, 0.0).unwrap();
    let (cmax, tmax) = peak(&p, &init, 6000.0);
    let pass = (cmax - 0.92).abs() <= 0.02 && (tmax / 2000.0 - 1.0).abs() <= 0.15;
    outcome(pass, format!("max C = {cmax:.4} at λt = {tmax}"))
}

fn c2_peak_time_law() -> Outcome {
    let p = eq(1.0, 0.1, 10.0, FRAC_1_SQRT_2);
    let init = InitialState::from_s_phi(1.0, 0.0).unwrap();
    let (_, tmax) = peak(&p, &init, 6000.0);
    let law = PI * 10.0 / (2.0 * 0.01);
    let rel = (tmax / law - 1.0).abs();
    outcome(rel < 0.1, format!("argmax λt = {tmax}, πδ/(2ℛ²) = {law:.1}, off by {:.1}%", rel * 100.0))
}

fn c3_cross_solver() -> Outcome {
    let init = InitialState::from_s_phi(0.3, 0.8).unwrap();
    let (mut worst_tight, mut worst_volterra) = (0.0f64, 0.0f64);
    for &r in &[0.1, 1.0, 10.0] {
        for &d in &[0.0, 0.7, 10.0, 50.0] {
            let p = eq(1.0, r, d, 0.6);
            let spacing = 0.01;
            let grid = uniform(20.0, spacing);
            let closed = evolve_subradiant(&grid, &init, &p).unwrap();
            let exact = evolve_exact(&grid, &init, &p).unwrap();
            let dt = 1e-3 / p.fastest_rate();
            let rk4 = oracle_on_grid(Method::Rk4, &init, &p, 20.0, spacing, dt);
            let vol = oracle_on_grid(Method::VolterraTrapezoid, &init, &p, 20.0, spacing, dt);
            for d in [closed.sup_distance(&exact), rk4.sup_distance(&exact), rk4.sup_distance(&closed)] {
                worst_tight = worst_tight.max(d);
            }
            for d in [vol.sup_distance(&exact), vol.sup_distance(&closed), vol.sup_distance(&rk4)] {
                worst_volterra = worst_volterra.max(d);
            }
        }
    }
    outcome(
        worst_tight < 1e-6 && worst_volterra < 1e-5,
        format!("closed/exact/RK4 max sup {worst_tight:.2e}, Volterra max sup {worst_volterra:.2e}"),
    )
}

fn c4_subradiant_trapping() -> Outcome {
    let mut worst = 0.0f64;
    for &r1 in &[0.2, FRAC_1_SQRT_2, 3f64.sqrt() / 2.0] {
        for &r in &[0.1, 1.0, 10.0] {
            for &d in &[0.0, 0.7, 10.0, 50.0] {
                let p = eq(1.0, r, d, r1);
                let init = InitialState::psi_minus(&p);
                let grid = uniform(100.0, 0.05);
                for traj in [evolve_exact(&grid, &init, &p).unwrap(), evolve_subradiant(&grid, &init, &p).unwrap()] {
                    let target = 2.0 * p.r_1 * p.r_2;
                    for c in concurrence_of(&traj) {
                        worst = worst.max((c - target).abs());
                    }
                }
            }
        }
    }
    outcome(worst < 1e-9, format!("max |C − 2r₁r₂| = {worst:.2e}"))
}

fn c5_stationary_maximum() -> Outcome {
    let (lambda, rabi, d) = (1.0, 0.1, 10.0);
    let t_long = 1e4 * d * d / (rabi * rabi);
    let init = InitialState::from_s_phi(1.0, 0.0).unwrap();
    let n = 2001;
    let mut best = (0.0, f64::NEG_INFINITY);
    let mut worst_gap = 0.0f64;
    for k in 0..n {
        let r1 = k as f64 / (n - 1) as f64;
        let p = eq(lambda, rabi, d, r1);
        let analytic = stationary_concurrence(&init, &p);
        let traj = evolve_exact(&TimeGrid::new(vec![0.0, t_long]).unwrap(), &init, &p).unwrap();
        let long = concurrence(traj.c1[1], traj.c2[1]).unwrap();
        worst_gap = worst_gap.max((long - analytic).abs());
        if long > best.1 {
            best = (r1, long);
        }
    }
    let target_r1 = 3f64.sqrt() / 2.0;
    let target_c = 3.0 * 3f64.sqrt() / 8.0;
    let p = eq(lambda, rabi, d, target_r1);
    let analytic_peak = stationary_concurrence(&init, &p);
    let pass = (best.0 - target_r1).abs() <= 1e-3
        && (best.1 - target_c).abs() <= 1e-6
        && (analytic_peak - target_c).abs() <= 1e-6
        && worst_gap <= 1e-6;
    outcome(
        pass,
        format!(
            "argmax r₁ = {:.4}, C_s = {:.8} (3√3/8 = {target_c:.8}), long-time vs analytic {worst_gap:.1e}",
            best.0, best.1
        ),
    )
}

fn c6_cubic_frame_shift() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst = 0.0f64;
    let mut zero_root = 0.0f64;
    for k in 0..200 {
        let lambda = rng.random_range(0.05..5.0);
        let rabi = rng.random_range(0.0..20.0);
        let d1 = rng.random_range(-50.0..50.0);
        let d2 = if k % 4 == 0 { d1 } else { rng.random_range(-50.0..50.0) };
        let r1 = rng.random_range(0.0..=1.0);
        let p = SystemParams::from_detunings(lambda, rabi, d1, d2, r1).unwrap();
        let eig = generator_matrix(&p).eigenvalues();
        let scale = eig.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for (q, d) in [(Qubit::One, d1), (Qubit::Two, d2)] {
            let roots = cubic_coefficients(&p, q).roots;
            let shifted: Vec<C64> = eig.iter().map(|z| z + C64::new(0.0, d)).collect();
            worst = worst.max(multiset_distance(&roots, &shifted) / scale);
            if d1 == d2 {
                let smallest = roots.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
                zero_root = zero_root.max(smallest / scale);
            }
        }
    }
    outcome(
        worst < 1e-9 && zero_root < 1e-9,
        format!("max relative root mismatch {worst:.1e}, max |zero root| {zero_root:.1e}"),
    )
}

fn multiset_distance(x: &[C64], y: &[C64]) -> f64 {
    let mut used = [false; 3];
    let mut worst = 0.0f64;
    for a in x {
        let (k, d) = (0..3)
            .filter(|&k| !used[k])
            .map(|k| (k, (a - y[k]).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

fn c7_symmetric_detuning() -> Outcome {
    let (lambda, rabi, d) = (1.0, 0.1, 0.7);
    let t_dead = 10.0 * (d * d + lambda * lambda) / (rabi * rabi);
    let init = InitialState::from_s_phi(0.0, 0.0).unwrap();
    let grid = uniform(2.0 * t_dead, 0.5);
    let curves: Vec<Vec<f64>> = [0.0, FRAC_1_SQRT_2, 3f64.sqrt() / 2.0, 1.0]
        .iter()
        .map(|&r1| {
            let p = SystemParams::from_detunings(lambda, rabi, -d, d, r1).unwrap();
            concurrence_of(&evolve_exact(&grid, &init, &p).unwrap())
        })
        .collect();
    let mut spread = 0.0f64;
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            spread = spread.max(rel_sup(&curves[i], &curves[j]));
        }
    }
    let tail = grid
        .times()
        .iter()
        .enumerate()
        .filter(|(_, &t)| t >= t_dead)
        .map(|(k, _)| curves.iter().map(|c| c[k]).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    outcome(
        spread < 0.05 && tail < 1e-3,
        format!("r₁ spread {:.2}% relative, max C after λt = {t_dead:.0} is {tail:.1e}", spread * 100.0),
    )
}

fn c8_dressed_spectrum() -> Outcome {
    let (mut energy, mut residual) = (0.0f64, 0.0f64);
    for &(r, d, r1) in &[(1.0, 0.3, FRAC_1_SQRT_2), (0.1, 10.0, 0.6), (10.0, 0.7, 0.2), (2.0, -3.0, 0.95), (5.0, 0.0, 0.5)] {
        let p = eq(1.0, r, d, r1);
        let h = lossless_hamiltonian(&p);
        let mut numeric: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
        numeric.sort_by(f64::total_cmp);
        let s = dressed_spectrum(&p).unwrap();
        let mut analytic = vec![s.omega_plus, s.omega_minus, s.omega_zero];
        analytic.sort_by(f64::total_cmp);
        for (a, b) in numeric.iter().zip(&analytic) {
            energy = energy.max((a - b).abs());
        }
        let dark = Vector3::new(p.r_2, -p.r_1, 0.0);
        residual = residual.max((h * dark - dark * d).norm());
    }
    outcome(
        energy < 1e-10 && residual < 1e-12,
        format!("max energy error {energy:.1e}, ψ₋ residual {residual:.1e}"),
    )
}

fn c9_beats() -> Outcome {
    let p = eq(1e-9, 1.0, 0.3, FRAC_1_SQRT_2);
    let init = InitialState::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0)).unwrap();
    let dt = 0.05;
    let grid = uniform(200.0, dt);
    let traj = evolve_exact(&grid, &init, &p).unwrap();
    let population: Vec<f64> = traj.c2.iter().map(|c| c.norm_sqr()).collect();
    let good = analyze_beats(&population, dt, &p).unwrap();
    let within = good
        .expected
        .iter()
        .zip(&good.matched)
        .all(|(f, m)| m.is_some_and(|m| (m.frequency - f).abs() <= 2.0 * good.bin_width));

    let bad = eq(1.0, 0.1, 10.0, 3f64.sqrt() / 2.0);
    let fact = InitialState::from_s_phi(1.0, 0.0).unwrap();
    let dt_bad = 0.1;
    let bad_traj = evolve_exact(&uniform(6000.0, dt_bad), &fact, &bad).unwrap();
    let bad_pop: Vec<f64> = bad_traj.c2.iter().map(|c| c.norm_sqr()).collect();
    let bad_conc = concurrence_of(&bad_traj);
    let bad_resolvable = analyze_beats(&bad_pop, dt_bad, &bad).unwrap().resolvable
        || analyze_beats(&bad_conc, dt_bad, &bad).unwrap().resolvable;
    let found: Vec<String> = good.matched.iter().flatten().map(|m| format!("{:.3}", m.frequency)).collect();
    outcome(
        within && good.resolvable && !bad_resolvable,
        format!(
            "lossless peaks [{}] vs expected {:?} (bin {:.3}); bad cavity resolvable = {bad_resolvable}",
            found.join(", "),
            good.expected,
            good.bin_width
        ),
    )
}

struct Ladder {
    regime: Regime,
    points: Vec<(SystemParams, f64)>,
    init: InitialState,
}

fn c10_approximation_validity() -> Outcome {
    let entangled = InitialState::from_s_phi(0.0, 0.0).unwrap();
    let factorized = InitialState::from_s_phi(1.0, 0.0).unwrap();
    let dispersive = |r1: f64, window: fn(f64) -> f64| -> Vec<(SystemParams, f64)> {
        [10.0, 50.0, 100.0].iter().map(|&d| (eq(1.0, 0.1, d, r1), window(d))).collect()
    };
    let small = |r1: f64| -> Vec<(SystemParams, f64)> { [10.0, 30.0].iter().map(|&r| (eq(1.0, r, 0.7, r1), 3.0)).collect() };
    let ladders = [
        Ladder { regime: Regime::DispersiveDecaySingle, points: dispersive(1.0, |d| 3.0 * d * d / 0.01), init: entangled },
        Ladder { regime: Regime::DispersiveDecaySymmetric, points: dispersive(FRAC_1_SQRT_2, |d| 3.0 * d * d / 0.01), init: entangled },
        Ladder { regime: Regime::DispersiveFactorized, points: dispersive(FRAC_1_SQRT_2, |d| PI * d / 0.01), init: factorized },
        Ladder {
            regime: Regime::FarDetuningSingle,
            points: [100.0, 500.0, 1000.0].iter().map(|&d| (eq(1.0, 10.0, d, 1.0), 3.0 * d * d / 100.0)).collect(),
            init: entangled,
        },
        Ladder { regime: Regime::BeatsSmallDetuning, points: small(FRAC_1_SQRT_2), init: factorized },
        Ladder { regime: Regime::SmallDetuningSingle, points: small(1.0), init: entangled },
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for ladder in &ladders {
        let mut errs = Vec::new();
        for (p, t_max) in &ladder.points {
            let grid = uniform(*t_max, t_max / 6000.0);
            let report = approx_error_report(p, &ladder.init, ladder.regime, &grid).unwrap();
            pass &= report.warnings.is_empty();
            errs.push(report.sup_norm);
        }
        pass &= errs.iter().all(|&e| e < 0.05) && errs.windows(2).all(|w| w[1] < w[0]);
        let listed: Vec<String> = errs.iter().map(|e| format!("{e:.1e}")).collect();
        parts.push(format!("{} [{}]", ladder.regime, listed.join(" > ")));
    }
    outcome(pass, parts.join("; "))
}

fn c11_numerical_hygiene() -> Outcome {
    let p = eq(1.0, 1.0, 0.7, 0.6);
    let init = InitialState::from_s_phi(0.3, 0.5).unwrap();
    let rk4 = observed_order(Method::Rk4, &init, &p, 5.0, 0.01);
    let vol = observed_order(Method::VolterraTrapezoid, &init, &p, 5.0, 0.01);

    let mut increase = f64::NEG_INFINITY;
    for (r, d1, d2) in [(0.1, 10.0, 10.0), (10.0, 0.7, 0.7), (10.0, 50.0, 50.0), (0.1, -0.7, 0.7), (0.1, -0.5, 0.9), (1.0, 0.0, 0.0)] {
        let q = SystemParams::from_detunings(1.0, r, d1, d2, 0.6).unwrap();
        let cfg = IntegratorConfig::default_for(&q, Method::Rk4, 10.0);
        let traj = evolve_rk4(&init, &q, &cfg).unwrap();
        increase = increase.max(max_norm_increase(&traj).unwrap());
    }

    let lossless = SystemParams::from_detunings(1e-8, 1.0, 0.3, 0.3, FRAC_1_SQRT_2).unwrap();
    let cfg = IntegratorConfig::default_for(&lossless, Method::Rk4, 1.0);
    let rk4_traj = evolve_rk4(&init, &lossless, &cfg).unwrap();
    let exact_traj = evolve_exact(&uniform(1.0, 1e-3), &init, &lossless).unwrap();
    let drift = [rk4_traj, exact_traj]
        .iter()
        .flat_map(|t| t.total_norm().unwrap())
        .map(|n| (n - 1.0).abs())
        .fold(0.0, f64::max);

    let pass = (rk4 - 4.0).abs() <= 0.3 && (vol - 2.0).abs() <= 0.3 && increase <= 1e-9 && drift <= 1e-6;
    outcome(
        pass,
        format!("RK4 order {rk4:.3}, Volterra order {vol:.3}, max norm increase/step {increase:.1e}, near-lossless drift {drift:.1e}"),
    )
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 11] = [
        (1, "dispersive peak C = 0.92", c1_dispersive_peak_value, Some(Duration::from_secs(5))),
        (2, "dispersive peak-time law", c2_peak_time_law, Some(Duration::from_secs(5))),
        (3, "cross-solver oracle suite", c3_cross_solver, Some(Duration::from_secs(60))),
        (4, "subradiant trapping", c4_subradiant_trapping, None),
        (5, "stationary-concurrence maximum", c5_stationary_maximum, None),
        (6, "cubic roots vs generator eigenvalues", c6_cubic_frame_shift, None),
        (7, "symmetric-detuning collapse and decay", c7_symmetric_detuning, None),
        (8, "dressed spectrum", c8_dressed_spectrum, None),
        (9, "beat spectroscopy", c9_beats, None),
        (10, "approximate-formula validity", c10_approximation_validity, None),
        (11, "numerical hygiene", c11_numerical_hygiene, None),
    ];
    let mut failures = 0;
    for (id, title, run, budget) in criteria {
        let start = Instant::now();
        let mut result = run();
        let elapsed = start.elapsed();
        if let Some(limit) = budget {
            if elapsed > limit {
                result.pass = false;
                result.detail.push_str(&format!("; over the {limit:?} budget"));
            }
        }
        if !result.pass {
            failures += 1;
        }
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {status} {title}: {} ({elapsed:.2?})", result.detail);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
