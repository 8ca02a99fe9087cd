//! Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion with the
//! measured values and exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use holonomy_lab::algebra::eig_unitary_2x2;
use holonomy_lab::cli::config::{ScenarioConfig, SweepAxis};
use holonomy_lab::deform::{deform_path, SmoothRotationField};
use holonomy_lab::dynamics::*;
use holonomy_lab::models::{analytic_bloch_floquet, energies_crossing, linspace, Branch};
use holonomy_lab::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_unit(rng: &mut ChaCha8Rng) -> BlochVector {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
    let r = (1.0 - z * z).sqrt();
    BlochVector::new(r * phi.cos(), r * phi.sin(), z).unwrap()
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let id = ComplexMatrix2::identity();
    let (mut idem, mut orth, mut comp, mut trip) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let a = random_unit(&mut rng);
        let OrderedProjectorPair { first: p, second: q } = projectors_from_bloch(&a);
        idem = idem.max((p * p).max_abs_diff(&p)).max((q * q).max_abs_diff(&q));
        orth = orth.max((p * q).max_abs()).max((q * p).max_abs());
        comp = comp.max((p + q).max_abs_diff(&id));
        trip = trip.max(bloch_from_projector(&p).unwrap().distance(&a));
    }
    let pass = idem <= 1e-12 && orth <= 1e-12 && comp <= 1e-12 && trip <= 1e-11;
    outcome(
        pass,
        format!("idempotency {idem:.2e}, orthogonality {orth:.2e}, completeness {comp:.2e}, round trip {trip:.2e}"),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let model = HamiltonianModel::Crossing;
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 1000 {
        let lambda: f64 = rng.gen_range(0.0..2.0 * PI);
        if (lambda - PI).abs() < 1e-3 {
            continue;
        }
        let e = eig_hermitian_2x2(&model.hamiltonian(lambda)).unwrap();
        let (e1, e2) = energies_crossing(lambda);
        // The analytic labels cross at π; compare as sets.
        let (hi, lo) = (e1.max(e2), e1.min(e2));
        worst = worst.max((e.upper - hi).abs()).max((e.lower - lo).abs());
        n += 1;
    }
    let gap = eig_hermitian_2x2(&model.hamiltonian(PI)).unwrap().gap();
    outcome(worst <= 1e-11 && gap < 1e-12, format!("max level error {worst:.2e}, gap at pi {gap:.2e}"))
}

fn criterion_3() -> Outcome {
    let model = ParametricModel::crossing();
    let a0 = BlochVector::e_y();
    let once = model.director_path(0.0, 2.0 * PI, 401).unwrap();
    let twice = model.director_path(0.0, 4.0 * PI, 801).unwrap();
    let lift1 = lift_path(&once, &a0).unwrap();
    let lift2 = lift_path(&twice, &a0).unwrap();
    let d1 = lift1.end().distance(&(-a0));
    let d2 = lift2.end().distance(&a0);
    let h1 = holonomy(&once, &a0).unwrap();
    let h2 = holonomy(&twice, &a0).unwrap();
    let pass = d1 <= 1e-6
        && d2 <= 1e-6
        && h1.permutation == Permutation::Swap
        && h2.permutation == Permutation::Identity
        && h1.homotopy_class == HomotopyClass::Gamma
        && h2.homotopy_class == HomotopyClass::E;
    outcome(
        pass,
        format!(
            "[0,2pi] end-to-(-e_y) {d1:.2e} verdict {}; [0,4pi] end-to-e_y {d2:.2e} verdict {}",
            h1.permutation, h2.permutation
        ),
    )
}

fn criterion_4() -> Outcome {
    let map = FloquetMap::default();
    let mut worst = 0.0f64;
    for lambda in linspace(0.0, 2.0 * PI, 401) {
        let a = eig_unitary_2x2(&map.unitary(lambda)).unwrap().bloch.unwrap();
        let d = covering_projection(&a).distance(&covering_projection(&analytic_bloch_floquet(lambda)));
        worst = worst.max(d);
    }
    let path = ParametricModel::floquet_map().director_path(0.0, 2.0 * PI, 401).unwrap();
    let verdict = holonomy(&path, &path.start().representative()).unwrap().permutation;

    let a0 = map.branch_bloch(0.0, Branch::Upper).unwrap();
    let rec = evolve_kicked(&map, &kick_sequence(0.0, 2.0 * PI, DEFAULT_KICKS), StateVector::from_bloch(&a0)).unwrap();
    let other = rec.final_state().fidelity(&(-a0));
    let kicked = summarize_kicked(&map, &rec).verdict;
    let pass = worst <= 1e-8
        && verdict == Permutation::Swap
        && other >= ADIABATIC_FIDELITY
        && kicked == Verdict::Adiabatic(Permutation::Swap);
    outcome(
        pass,
        format!(
            "director error {worst:.2e}, classify {verdict}, N=1e4 fidelity with other projector {other:.6}, run verdict {kicked}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let model = HamiltonianModel::perturbed(0.1).unwrap();
    let schedule = SweepSchedule::uniform(2000.0).unwrap();
    let psi0 = StateVector::from_bloch(&model.branch_bloch(0.0, Branch::Upper).unwrap());
    let rec = evolve_continuous(&model, &schedule, psi0, 0.01).unwrap();
    let s = summarize_continuous(&model, &schedule, &rec);
    let pass = s.verdict == Verdict::Adiabatic(Permutation::Identity) && s.tracked_fidelity >= ADIABATIC_FIDELITY;
    outcome(pass, format!("verdict {}, final fidelity {:.6}", s.verdict, s.tracked_fidelity))
}

fn criterion_6() -> Outcome {
    let model = HamiltonianModel::perturbed(0.1).unwrap();
    let kind = ScheduleKind::DiabaticWindow { half_width: 0.3, rate_multiplier: 8.0 };
    let schedule = SweepSchedule::with_crossing_rate(kind, 1.0).unwrap();
    let psi0 = StateVector::from_bloch(&model.branch_bloch(0.0, Branch::Upper).unwrap());
    let rec = evolve_continuous(&model, &schedule, psi0, 0.01).unwrap();
    let s = summarize_continuous(&model, &schedule, &rec);
    let lz = s.landau_zener_estimate.unwrap();
    let fid = s.diabatic_fidelity.unwrap();
    let pass = lz > 0.95 && fid >= DIABATIC_FIDELITY && s.verdict == Verdict::Diabatic(Permutation::Swap);
    outcome(
        pass,
        format!(
            "eps 0.1, window w=0.3 r=8, crossing rate 1.0: landau-zener {lz:.4}, fidelity with unperturbed branch {fid:.4}, verdict {}",
            s.verdict
        ),
    )
}

fn criterion_7() -> Outcome {
    let e_cycle = ParametricModel::perturbed(0.1).unwrap().director_path(0.0, 2.0 * PI, 401).unwrap();
    let g_cycle = ParametricModel::crossing().director_path(0.0, 2.0 * PI, 401).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut changed = 0;
    let mut max_angle = 0.0f64;
    for (path, expected) in [(&e_cycle, Permutation::Identity), (&g_cycle, Permutation::Swap)] {
        for _ in 0..100 {
            let modes = rng.gen_range(1..=5);
            let field = SmoothRotationField::random(&mut rng, 0.05, modes).unwrap();
            max_angle = max_angle.max(field.max_angle(2000));
            let deformed = deform_path(path, &field).unwrap();
            match holonomy(&deformed, &deformed.start().representative()) {
                Ok(h) if h.permutation == expected => {}
                _ => changed += 1,
            }
        }
    }
    outcome(
        changed == 0 && max_angle <= 0.05 + 1e-12,
        format!("200 deformations (max angle {max_angle:.4} rad): {changed} verdict changes"),
    )
}

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn bundled_scenarios() -> Vec<(String, PathBuf)> {
    let mut v: Vec<(String, PathBuf)> = fs::read_dir(scenarios_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .map(|p| {
            let stem = p.file_stem().unwrap().to_string_lossy().into_owned();
            let command = stem.split('_').next().unwrap().to_owned();
            (command, p)
        })
        .collect();
    v.sort();
    v
}

/// The continuous run with the most integration steps among the bundled scenarios.
fn longest_bundled_run() -> (String, HamiltonianModel, SweepSchedule, f64) {
    let mut best: Option<(f64, (String, HamiltonianModel, SweepSchedule, f64))> = None;
    for (command, path) in bundled_scenarios() {
        let config = ScenarioConfig::load(&path).unwrap();
        let mut runs = Vec::new();
        match command.as_str() {
            "simulate" => {
                if let ParametricModel::Hamiltonian(h) = config.build_model().unwrap() {
                    runs.push((h, config.schedule.build().unwrap()));
                }
            }
            "sweep" => {
                for &v in &config.sweep.values {
                    match config.sweep.axis {
                        SweepAxis::Epsilon => {
                            runs.push((HamiltonianModel::perturbed(v).unwrap(), config.schedule.build().unwrap()))
                        }
                        SweepAxis::Rate => {
                            if let ParametricModel::Hamiltonian(h) = config.build_model().unwrap() {
                                runs.push((h, SweepSchedule::with_crossing_rate(config.schedule.kind(), v).unwrap()));
                            }
                        }
                        SweepAxis::Samples => {}
                    }
                }
            }
            _ => {}
        }
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        for (h, schedule) in runs {
            let steps = schedule.total_time() / config.schedule.dt;
            if best.as_ref().is_none_or(|(b, _)| steps > *b) {
                best = Some((steps, (name.clone(), h, schedule, config.schedule.dt)));
            }
        }
    }
    best.unwrap().1
}

fn criterion_8() -> Outcome {
    let (name, model, schedule, dt) = longest_bundled_run();
    let psi0 = StateVector::from_bloch(&model.branch_bloch(0.0, Branch::Upper).unwrap());
    let rec = evolve_continuous(&model, &schedule, psi0, dt).unwrap();
    let drift = rec.max_norm_drift();

    let model = HamiltonianModel::perturbed(0.1).unwrap();
    let schedule = SweepSchedule::uniform(20.0).unwrap();
    let psi0 = StateVector::from_bloch(&model.branch_bloch(0.0, Branch::Upper).unwrap());
    let run = |dt: f64| evolve_continuous(&model, &schedule, psi0, dt).unwrap().final_state().components();
    let dist = |a: [num_complex::Complex64; 2], b: [num_complex::Complex64; 2]| {
        ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt()
    };
    let reference = run(0.1 / 8.0);
    let ratio = dist(run(0.1), reference) / dist(run(0.05), reference);
    outcome(
        drift <= 1e-9 && (2.5..=6.0).contains(&ratio),
        format!("norm drift {drift:.2e} over {} steps ({name}), error ratio per dt halving {ratio:.3}", rec.len() - 1),
    )
}

fn run_scenario(command: &str, config: &Path, out: &Path) -> std::result::Result<(), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_holonomy-lab"))
        .args([command, "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .env_remove("HOLONOMY_LAB_THREADS")
        .output()
        .map_err(|e| e.to_string())?;
    if o.status.success() {
        Ok(())
    } else {
        Err(format!("{}: {}", config.display(), String::from_utf8_lossy(&o.stderr)))
    }
}

fn dir_contents(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn criterion_9() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let scenarios = bundled_scenarios();
    let mut mismatched = Vec::new();
    let mut csv_files = 0;
    for (command, path) in &scenarios {
        let stem = path.file_stem().unwrap().to_string_lossy().into_owned();
        let (a, b) = (tmp.path().join(format!("{stem}-a")), tmp.path().join(format!("{stem}-b")));
        if let Err(e) = run_scenario(command, path, &a).and_then(|_| run_scenario(command, path, &b)) {
            return outcome(false, format!("scenario failed: {e}"));
        }
        let (fa, fb) = (dir_contents(&a), dir_contents(&b));
        csv_files += fa.iter().filter(|(n, _)| n.ends_with(".csv")).count();
        if fa != fb || fa.is_empty() {
            mismatched.push(stem);
        }
    }
    outcome(
        mismatched.is_empty(),
        format!(
            "{} scenarios run twice, {csv_files} CSV files, mismatches: {}",
            scenarios.len(),
            if mismatched.is_empty() { "none".to_owned() } else { mismatched.join(", ") }
        ),
    )
}

type Check = fn() -> Outcome;

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("eigenprojector formula", criterion_1),
        ("crossing-model spectrum", criterion_2),
        ("open-lift anholonomy", criterion_3),
        ("quantum-map anholonomy", criterion_4),
        ("avoided crossing is adiabatically trivial", criterion_5),
        ("diabatic recovery", criterion_6),
        ("homotopy robustness", criterion_7),
        ("integrator quality", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| outcome(false, "panicked".to_owned()));
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{tag}] {name}: {}", i + 1, result.detail);
        if !result.pass {
            failures += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
