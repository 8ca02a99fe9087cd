mod common;

use std::f64::consts::PI;

use common::*;
use holonomy_lab::dynamics::*;
use holonomy_lab::models::{analytic_bloch_crossing, analytic_bloch_floquet, linspace, Branch};
use holonomy_lab::*;
use num_complex::Complex64 as C64;

fn perturbed(eps: f64) -> HamiltonianModel {
    HamiltonianModel::perturbed(eps).unwrap()
}

fn upper_state(model: &HamiltonianModel, lambda: f64) -> StateVector {
    StateVector::from_bloch(&model.branch_bloch(lambda, Branch::Upper).unwrap())
}

fn diff(a: &StateVector, b: &StateVector) -> f64 {
    let (a, b) = (a.components(), b.components());
    ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt()
}

#[test]
fn stationary_state_picks_up_only_a_phase() {
    let h = StaticHamiltonian(pauli(Axis::Z).scale(C64::from(0.5)));
    let schedule = SweepSchedule::uniform(2.0 * PI).unwrap();
    let psi0 = StateVector::new(C64::from(1.0), C64::from(0.0)).unwrap();
    let rec = evolve_continuous(&h, &schedule, psi0, 0.01).unwrap();
    let [c0, c1] = rec.final_state().components();
    assert!((c0 - C64::from_polar(1.0, -PI)).norm() < 1e-12);
    assert!(c1.norm() < 1e-15);
    assert!(rec.projector_fidelities.iter().all(|f| (f - 1.0).abs() < 1e-12));
    let trace = fidelity_trace(&rec, &rec.reference).unwrap();
    assert!(trace.iter().all(|f| (f - 1.0).abs() < 1e-10));
}

#[test]
fn coarse_steps_are_rejected() {
    let schedule = SweepSchedule::uniform(10.0).unwrap();
    let h = StaticHamiltonian(pauli(Axis::X).scale(C64::from(5.0)));
    let psi0 = StateVector::new(C64::from(1.0), C64::from(0.0)).unwrap();
    assert!(matches!(evolve_continuous(&h, &schedule, psi0, 0.05), Err(HolonomyError::StepTooCoarse { .. })));
}

#[test]
fn integrator_is_second_order() {
    let model = perturbed(0.1);
    let schedule = SweepSchedule::uniform(20.0).unwrap();
    let psi0 = upper_state(&model, 0.0);
    let run = |dt: f64| *evolve_continuous(&model, &schedule, psi0, dt).unwrap().final_state();
    let dt = 0.1;
    let reference = run(dt / 8.0);
    let e1 = diff(&run(dt), &reference);
    let e2 = diff(&run(dt / 2.0), &reference);
    let ratio = e1 / e2;
    println!("errors {e1:.3e} {e2:.3e} ratio {ratio:.3}");
    assert!((2.5..=6.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn midpoint_exponential_agrees_with_rk4() {
    let eps = 0.1;
    let model = perturbed(eps);
    let schedule = SweepSchedule::diabatic_window(200.0, 0.3, 4.0).unwrap();
    let psi0 = upper_state(&model, 0.0);
    let rec = evolve_continuous(&model, &schedule, psi0, 0.002).unwrap();
    let oracle = rk4(|t| perturbed_matrix(schedule.lambda_at(t), eps), psi0.components(), 200.0, 200_000);
    let got = rec.final_state().components();
    let d = ((got[0] - oracle[0]).norm_sqr() + (got[1] - oracle[1]).norm_sqr()).sqrt();
    assert!(d < 1e-4, "deviation {d}");
}

#[test]
fn slow_sweep_follows_the_perturbed_eigenprojector() {
    let model = perturbed(0.1);
    let schedule = SweepSchedule::uniform(2000.0).unwrap();
    let rec = evolve_continuous(&model, &schedule, upper_state(&model, 0.0), 0.01).unwrap();
    let summary = summarize_continuous(&model, &schedule, &rec);
    // The upper eigenvector of the perturbed family is single valued on the
    // circle, so the continued projector at 2π is the initial one.
    let oracle = overlap_sq(perturbed_upper_state(2.0 * PI, 0.1), rec.final_state().components());
    println!("tracked {:.6} oracle {oracle:.6} min {:.6}", summary.tracked_fidelity, rec.min_fidelity());
    assert!((oracle - summary.tracked_fidelity).abs() < 1e-9);
    assert!(summary.tracked_fidelity >= ADIABATIC_FIDELITY);
    assert!(rec.min_fidelity() >= ADIABATIC_FIDELITY);
    assert_eq!(summary.verdict, Verdict::Adiabatic(Permutation::Identity));
    assert!(rec.max_norm_drift() < 1e-9);
}

#[test]
fn adiabatic_threshold_survives_refinement() {
    let model = perturbed(0.1);
    for (t, dt) in [(2000.0, 0.005), (4000.0, 0.01)] {
        let schedule = SweepSchedule::uniform(t).unwrap();
        let rec = evolve_continuous(&model, &schedule, upper_state(&model, 0.0), dt).unwrap();
        assert!(rec.final_fidelity() >= ADIABATIC_FIDELITY, "T {t} dt {dt}: {}", rec.final_fidelity());
    }
}

#[test]
fn fidelity_rises_with_total_time() {
    let model = perturbed(0.1);
    let finals: Vec<f64> = [250.0, 1000.0, 4000.0]
        .iter()
        .map(|&t| {
            let schedule = SweepSchedule::uniform(t).unwrap();
            evolve_continuous(&model, &schedule, upper_state(&model, 0.0), 0.01).unwrap().final_fidelity()
        })
        .collect();
    println!("final fidelities {finals:?}");
    assert!(finals.windows(2).all(|w| w[1] >= w[0] - 0.01));
    assert!(finals[2] > 0.999);
}

#[test]
fn fast_window_follows_the_unperturbed_branch() {
    let model = perturbed(0.1);
    let schedule =
        SweepSchedule::with_crossing_rate(ScheduleKind::DiabaticWindow { half_width: 0.3, rate_multiplier: 8.0 }, 1.0)
            .unwrap();
    let rec = evolve_continuous(&model, &schedule, upper_state(&model, 0.0), 0.01).unwrap();
    let summary = summarize_continuous(&model, &schedule, &rec);
    // Oracle: the same run with RK4, compared with the crossing branch directly.
    let oracle_state = rk4(
        |t| perturbed_matrix(schedule.lambda_at(t), 0.1),
        upper_state(&model, 0.0).components(),
        schedule.total_time(),
        200_000,
    );
    let a0 = analytic_bloch_crossing(0.0);
    let sign = a0.dot(&model.branch_bloch(0.0, Branch::Upper).unwrap()).signum();
    let end = analytic_bloch_crossing(2.0 * PI).components().map(|x| sign * x);
    let oracle = overlap_sq(state_from_bloch(end), oracle_state);
    let lz = summary.landau_zener_estimate.unwrap();
    let fid = summary.diabatic_fidelity.unwrap();
    println!("landau-zener {lz:.4} diabatic fidelity {fid:.4} oracle {oracle:.4}");
    assert!(lz > 0.95);
    assert!((fid - oracle).abs() < 1e-4);
    assert!(fid >= DIABATIC_FIDELITY);
    assert_eq!(summary.verdict, Verdict::Diabatic(Permutation::Swap));
}

#[test]
fn very_weak_gap_with_slower_window_is_also_diabatic() {
    let model = perturbed(0.02);
    let schedule = SweepSchedule::diabatic_window(600.0, 0.3, 4.0).unwrap();
    let rec = evolve_continuous(&model, &schedule, upper_state(&model, 0.0), 0.01).unwrap();
    let summary = summarize_continuous(&model, &schedule, &rec);
    assert!(summary.landau_zener_estimate.unwrap() > 0.95);
    assert_eq!(summary.verdict, Verdict::Diabatic(Permutation::Swap));
}

#[test]
fn landau_zener_limits() {
    assert!(landau_zener_probability(1e-6, 0.1).unwrap() > 1.0 - 1e-9);
    assert!(landau_zener_probability(0.1, 1e-6).unwrap() < 1e-100);
    assert!(matches!(landau_zener_probability(0.0, 1.0), Err(HolonomyError::NonPositiveInput { .. })));
    assert!(matches!(landau_zener_probability(0.1, -1.0), Err(HolonomyError::NonPositiveInput { .. })));
}

#[test]
fn landau_zener_half_matches_integration() {
    let eps = 0.1;
    // exp(-π ε² / v) = 1/2
    let rate = PI * eps * eps / 2f64.ln();
    assert!((landau_zener_probability(eps, rate).unwrap() - 0.5).abs() < 1e-12);
    let model = perturbed(eps);
    let schedule =
        SweepSchedule::with_crossing_rate(ScheduleKind::DiabaticWindow { half_width: 0.3, rate_multiplier: 8.0 }, rate)
            .unwrap();
    let rec = evolve_continuous(&model, &schedule, upper_state(&model, 0.0), 0.01).unwrap();
    let summary = summarize_continuous(&model, &schedule, &rec);
    let p = summary.diabatic_fidelity.unwrap();
    println!("rate {rate:.5}: diabatic population {p:.4}");
    assert!((p - 0.5).abs() <= 0.15);
}

#[test]
fn kicked_map_is_stationary_at_fixed_lambda() {
    let map = FloquetMap::default();
    let a0 = map.branch_bloch(0.0, Branch::Upper).unwrap();
    let rec = evolve_kicked(&map, &[0.0; 500], StateVector::from_bloch(&a0)).unwrap();
    assert!(rec.projector_fidelities.iter().all(|f| (f - 1.0).abs() < 1e-10));
}

#[test]
fn slow_kicking_exchanges_the_eigenprojectors() {
    let map = FloquetMap::default();
    let a0 = map.branch_bloch(0.0, Branch::Upper).unwrap();
    let lambdas = kick_sequence(0.0, 2.0 * PI, DEFAULT_KICKS);
    let rec = evolve_kicked(&map, &lambdas, StateVector::from_bloch(&a0)).unwrap();
    let other = rec.final_state().fidelity(&(-a0));
    assert!(other >= ADIABATIC_FIDELITY, "fidelity with the other projector {other}");
    assert_eq!(summarize_kicked(&map, &rec).verdict, Verdict::Adiabatic(Permutation::Swap));
}

#[test]
fn fast_kicking_is_reported_without_a_claim() {
    let map = FloquetMap::default();
    let a0 = map.branch_bloch(0.0, Branch::Upper).unwrap();
    let lambdas = kick_sequence(0.0, 2.0 * PI, 10);
    let rec = evolve_kicked(&map, &lambdas, StateVector::from_bloch(&a0)).unwrap();
    let same = rec.final_state().fidelity(&a0);
    let other = rec.final_state().fidelity(&(-a0));
    println!("N = 10: fidelity with initial {same:.4}, with other {other:.4}");
    assert!((same + other - 1.0).abs() < 1e-12);
    // At these constants each kick is a π rotation about the current axis, so
    // even ten kicks land on the other projector; the step is still too
    // coarse to support a claim.
    let (step, gap) = kick_adiabaticity(&map, &rec);
    assert!(step > KICK_STEP_FRACTION * gap);
    assert_eq!(summarize_kicked(&map, &rec).verdict, Verdict::Unresolved);
}

#[test]
fn slow_kicked_trajectory_matches_the_parametric_lift() {
    let map = FloquetMap::default();
    let a0 = map.branch_bloch(0.0, Branch::Upper).unwrap();
    let rec = evolve_kicked(&map, &kick_sequence(0.0, 2.0 * PI, DEFAULT_KICKS), StateVector::from_bloch(&a0)).unwrap();

    let grid = linspace(0.0, 2.0 * PI, 4001);
    let points: Vec<BlochVector> = grid.iter().map(|&l| analytic_bloch_floquet(l)).collect();
    let path = DirectorPath::from_bloch(&points, grid.clone()).unwrap();
    let lift = lift_path(&path, &a0).unwrap();
    let step = grid[1] - grid[0];
    let worst = rec
        .states
        .iter()
        .zip(&rec.lambdas)
        .map(|(s, &l)| {
            let k = ((l / step).round() as usize).min(grid.len() - 1);
            s.bloch().distance(&lift.samples[k])
        })
        .fold(0.0, f64::max);
    println!("max Bloch distance to lift {worst:.3e}");
    assert!(worst <= 0.05);
}

#[test]
fn fidelity_trace_checks_grids() {
    let model = perturbed(0.1);
    let schedule = SweepSchedule::uniform(50.0).unwrap();
    let rec = evolve_continuous(&model, &schedule, upper_state(&model, 0.0), 0.05).unwrap();
    let short = BlochPath { samples: vec![BlochVector::e_x(); 2], params: vec![0.0, 0.1] };
    assert!(matches!(fidelity_trace(&rec, &short), Err(HolonomyError::GridMismatch(_))));
    let empty = BlochPath { samples: vec![], params: vec![] };
    assert!(matches!(fidelity_trace(&rec, &empty), Err(HolonomyError::GridMismatch(_))));
    let own = fidelity_trace(&rec, &rec.reference).unwrap();
    for (a, b) in own.iter().zip(&rec.projector_fidelities) {
        assert!((a - b).abs() < 1e-15);
    }
}
