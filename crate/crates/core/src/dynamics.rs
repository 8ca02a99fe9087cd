//! Time evolution along a parameter cycle and projector-fidelity tracking.
//!
//! Continuous models are stepped with the exact exponential of the midpoint
//! Hamiltonian, `ψ(t + dt) = exp(-i dt H(λ(t + dt/2))) ψ(t)` (ħ = 1), which is
//! unitary to rounding at every step and second order in `dt`. The kicked map
//! is applied one period at a time, `ψ_{n+1} = U(λ_n) ψ_n`.
//!
//! Every record carries a reference Bloch path: the eigenprojector of the
//! instantaneous operator that the initial state starts closest to, continued
//! along the run by path lifting.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::algebra::{expm_from_parts, ComplexMatrix2};
use crate::bloch::{projectors_from_bloch, BlochVector, Director};
use crate::error::{HolonomyError, Result};
use crate::lift::{BlochPath, Permutation, STEP_CAP};
use crate::models::{analytic_bloch_crossing, FloquetMap, HamiltonianModel, PERIOD};

/// Final tracking fidelity required to call a run adiabatic.
pub const ADIABATIC_FIDELITY: f64 = 0.99;
/// Final fidelity against the unperturbed branch required to call a run diabatic.
pub const DIABATIC_FIDELITY: f64 = 0.9;
/// Largest allowed `|H| dt`.
pub const MAX_STEP_PHASE: f64 = 0.1;
/// Default number of kicks per period for adiabatic kicked runs.
pub const DEFAULT_KICKS: usize = 10_000;
/// A kicked run supports an adiabatic claim only if every `|λ_{n+1} - λ_n|`
/// is at most this fraction of the smallest quasienergy gap on the run.
pub const KICK_STEP_FRACTION: f64 = 0.01;

/// A normalized two-component state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector([C64; 2]);

impl StateVector {
    pub fn new(c0: C64, c1: C64) -> Result<Self> {
        let n = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
        if !n.is_finite() || n < 1e-12 {
            return Err(HolonomyError::ZeroVector { norm: n });
        }
        Ok(StateVector([c0 / n, c1 / n]))
    }

    /// The state whose projector is `(1 + a·σ)/2`, with a real first component.
    pub fn from_bloch(a: &BlochVector) -> Self {
        let theta = a.z().clamp(-1.0, 1.0).acos();
        let phi = a.y().atan2(a.x());
        StateVector([C64::from((theta / 2.0).cos()), C64::from_polar((theta / 2.0).sin(), phi)])
    }

    pub fn components(&self) -> [C64; 2] {
        self.0
    }

    pub fn norm(&self) -> f64 {
        (self.0[0].norm_sqr() + self.0[1].norm_sqr()).sqrt()
    }

    /// `<ψ|σ|ψ>`, normalized.
    pub fn bloch(&self) -> BlochVector {
        let [a, b] = self.0;
        let cross = a.conj() * b;
        BlochVector::from_array([2.0 * cross.re, 2.0 * cross.im, a.norm_sqr() - b.norm_sqr()])
            .expect("state has unit norm")
    }

    /// `<ψ| P(a) |ψ>` with `P(a) = (1 + a·σ)/2`.
    pub fn fidelity(&self, a: &BlochVector) -> f64 {
        let p = projectors_from_bloch(a).first;
        let v = p.apply(self.0);
        (self.0[0].conj() * v[0] + self.0[1].conj() * v[1]).re
    }

    fn evolve(&self, u: &ComplexMatrix2) -> Self {
        StateVector(u.apply(self.0))
    }
}

/// A Hermitian family `λ ↦ H(λ)` with an eigen-director for reference tracking.
pub trait HamiltonianFamily: Sync {
    fn hamiltonian(&self, lambda: f64) -> ComplexMatrix2;

    fn eigen_director(&self, lambda: f64) -> Option<Director> {
        crate::algebra::eig_hermitian_2x2(&self.hamiltonian(lambda))
            .ok()?
            .bloch
            .map(|a| crate::bloch::covering_projection(&a))
    }
}

impl HamiltonianFamily for HamiltonianModel {
    fn hamiltonian(&self, lambda: f64) -> ComplexMatrix2 {
        HamiltonianModel::hamiltonian(self, lambda)
    }

    fn eigen_director(&self, lambda: f64) -> Option<Director> {
        HamiltonianModel::eigen_director(self, lambda)
    }
}

/// A `λ`-independent Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticHamiltonian(pub ComplexMatrix2);

impl HamiltonianFamily for StaticHamiltonian {
    fn hamiltonian(&self, _lambda: f64) -> ComplexMatrix2 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScheduleKind {
    Uniform,
    /// Sweep `r` times faster inside `|λ - π| < half_width`.
    DiabaticWindow {
        half_width: f64,
        rate_multiplier: f64,
    },
}

/// `λ(t)` on `[0, T]`, continuous and non-decreasing from `0` to `2π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSchedule {
    total_time: f64,
    kind: ScheduleKind,
    outside_rate: f64,
}

impl SweepSchedule {
    pub fn uniform(total_time: f64) -> Result<Self> {
        check_positive("total_time", total_time)?;
        Ok(SweepSchedule { total_time, kind: ScheduleKind::Uniform, outside_rate: PERIOD / total_time })
    }

    pub fn diabatic_window(total_time: f64, half_width: f64, rate_multiplier: f64) -> Result<Self> {
        check_positive("total_time", total_time)?;
        check_positive("half_width", half_width)?;
        check_positive("rate_multiplier", rate_multiplier)?;
        if half_width >= PI {
            return Err(HolonomyError::InvalidArgument(format!("window half width {half_width} must be below pi")));
        }
        // T = (2π - 2w)/ω + 2w/(rω)
        let outside_rate = (PERIOD - 2.0 * half_width + 2.0 * half_width / rate_multiplier) / total_time;
        Ok(SweepSchedule {
            total_time,
            kind: ScheduleKind::DiabaticWindow { half_width, rate_multiplier },
            outside_rate,
        })
    }

    pub fn from_kind(kind: ScheduleKind, total_time: f64) -> Result<Self> {
        match kind {
            ScheduleKind::Uniform => Self::uniform(total_time),
            ScheduleKind::DiabaticWindow { half_width, rate_multiplier } => {
                Self::diabatic_window(total_time, half_width, rate_multiplier)
            }
        }
    }

    /// Same shape, with the total time chosen so that `dλ/dt` at `λ = π`
    /// equals `rate`.
    pub fn with_crossing_rate(kind: ScheduleKind, rate: f64) -> Result<Self> {
        check_positive("rate", rate)?;
        let total_time = match kind {
            ScheduleKind::Uniform => PERIOD / rate,
            ScheduleKind::DiabaticWindow { half_width, rate_multiplier } => {
                let outside = rate / rate_multiplier;
                (PERIOD - 2.0 * half_width) / outside + 2.0 * half_width / rate
            }
        };
        Self::from_kind(kind, total_time)
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn lambda_at(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= self.total_time {
            return PERIOD;
        }
        let w = self.outside_rate;
        match self.kind {
            ScheduleKind::Uniform => w * t,
            ScheduleKind::DiabaticWindow { half_width, rate_multiplier } => {
                let t1 = (PI - half_width) / w;
                let t2 = t1 + 2.0 * half_width / (rate_multiplier * w);
                if t <= t1 {
                    w * t
                } else if t <= t2 {
                    PI - half_width + rate_multiplier * w * (t - t1)
                } else {
                    (PI + half_width + w * (t - t2)).min(PERIOD)
                }
            }
        }
    }

    /// `dλ/dt` at parameter value `λ`.
    pub fn rate_at(&self, lambda: f64) -> f64 {
        match self.kind {
            ScheduleKind::Uniform => self.outside_rate,
            ScheduleKind::DiabaticWindow { half_width, rate_multiplier } => {
                if (lambda - PI).abs() < half_width {
                    rate_multiplier * self.outside_rate
                } else {
                    self.outside_rate
                }
            }
        }
    }

    pub fn crossing_rate(&self) -> f64 {
        self.rate_at(PI)
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(HolonomyError::NonPositiveInput { name, value })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionRecord {
    pub times: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub states: Vec<StateVector>,
    /// Fidelity of each state with the matching sample of `reference`.
    pub projector_fidelities: Vec<f64>,
    /// The continued eigenprojector the run is compared against.
    pub reference: BlochPath,
}

impl EvolutionRecord {
    pub fn final_state(&self) -> &StateVector {
        &self.states[self.states.len() - 1]
    }

    pub fn final_fidelity(&self) -> f64 {
        self.projector_fidelities[self.projector_fidelities.len() - 1]
    }

    pub fn min_fidelity(&self) -> f64 {
        self.projector_fidelities.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.states.iter().map(|s| (s.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Incrementally lifts eigen-directors starting from the branch nearest to ψ0.
struct ReferenceTracker {
    current: BlochVector,
    samples: Vec<BlochVector>,
}

impl ReferenceTracker {
    fn start(director: Director, psi0: &StateVector) -> Self {
        let rep = director.representative();
        let current = if rep.dot(&psi0.bloch()) >= 0.0 { rep } else { -rep };
        ReferenceTracker { current, samples: vec![current] }
    }

    fn push(&mut self, director: Director, index: usize) -> Result<()> {
        let rep = director.representative();
        let d = self.current.dot(&rep);
        if d.abs() < STEP_CAP {
            return Err(HolonomyError::StepTooLarge { index, overlap: d.abs() });
        }
        self.current = if d > 0.0 { rep } else { -rep };
        self.samples.push(self.current);
        Ok(())
    }
}

/// Integrates `i dψ/dt = H(λ(t)) ψ` over the schedule.
///
/// The step is `T / ceil(T / dt)` so the run ends exactly at `T`.
pub fn evolve_continuous<F: HamiltonianFamily + ?Sized>(
    family: &F,
    schedule: &SweepSchedule,
    psi0: StateVector,
    dt: f64,
) -> Result<EvolutionRecord> {
    check_positive("dt", dt)?;
    let total = schedule.total_time();
    let n_steps = ((total / dt) - 1e-9).ceil().max(1.0) as usize;
    let h = total / n_steps as f64;

    let director_at = |lambda: f64| family.eigen_director(lambda).ok_or(HolonomyError::DegeneracyOnPath { lambda });

    let mut times = Vec::with_capacity(n_steps + 1);
    let mut lambdas = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);

    let lambda0 = schedule.lambda_at(0.0);
    let mut tracker = ReferenceTracker::start(director_at(lambda0)?, &psi0);
    let mut psi = psi0;
    times.push(0.0);
    lambdas.push(lambda0);
    states.push(psi);

    for k in 0..n_steps {
        let t_mid = (k as f64 + 0.5) * h;
        let hm = family.hamiltonian(schedule.lambda_at(t_mid));
        let (c, v) = hm.hermitian_parts()?;
        let product = (c.abs() + crate::algebra::norm3(&v)) * h;
        if product >= MAX_STEP_PHASE {
            return Err(HolonomyError::StepTooCoarse { product, time: t_mid });
        }
        psi = psi.evolve(&expm_from_parts(c, v, h));

        let t = if k + 1 == n_steps { total } else { (k + 1) as f64 * h };
        let lambda = schedule.lambda_at(t);
        tracker.push(director_at(lambda)?, k)?;
        times.push(t);
        lambdas.push(lambda);
        states.push(psi);
    }

    let reference = BlochPath { samples: tracker.samples, params: lambdas.clone() };
    let projector_fidelities = states.iter().zip(&reference.samples).map(|(s, a)| s.fidelity(a)).collect();
    Ok(EvolutionRecord { times, lambdas, states, projector_fidelities, reference })
}

/// Applies `ψ_{n+1} = U(λ_n) ψ_n` for each entry of `lambdas`.
///
/// State 0 is `ψ0` at `λ_0`; state `n + 1` is recorded at `λ_n`. Times count
/// kicks.
pub fn evolve_kicked(map: &FloquetMap, lambdas: &[f64], psi0: StateVector) -> Result<EvolutionRecord> {
    if lambdas.is_empty() {
        return Err(HolonomyError::InvalidArgument("empty lambda sequence".into()));
    }
    let director_at = |lambda: f64| map.spectrum(lambda).director.ok_or(HolonomyError::DegeneracyOnPath { lambda });
    let n = lambdas.len();
    let mut times = Vec::with_capacity(n + 1);
    let mut rec_lambdas = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);

    let mut tracker = ReferenceTracker::start(director_at(lambdas[0])?, &psi0);
    let mut psi = psi0;
    times.push(0.0);
    rec_lambdas.push(lambdas[0]);
    states.push(psi);
    for (k, &lambda) in lambdas.iter().enumerate() {
        psi = psi.evolve(&map.unitary(lambda));
        tracker.push(director_at(lambda)?, k)?;
        times.push((k + 1) as f64);
        rec_lambdas.push(lambda);
        states.push(psi);
    }
    let reference = BlochPath { samples: tracker.samples, params: rec_lambdas.clone() };
    let projector_fidelities = states.iter().zip(&reference.samples).map(|(s, a)| s.fidelity(a)).collect();
    Ok(EvolutionRecord { times, lambdas: rec_lambdas, states, projector_fidelities, reference })
}

/// `λ_n = λ_start + period · n / N` for `n = 0..=N`.
pub fn kick_sequence(lambda_start: f64, period: f64, kicks: usize) -> Vec<f64> {
    crate::models::linspace(lambda_start, lambda_start + period, kicks + 1)
}

/// Diabatic transition estimate `exp(-π ε² / (2 v̄))` at the avoided crossing.
///
/// `sweep_rate` is `dλ/dt` at `λ = π`. The unperturbed splitting there is
/// `cos(λ/2)`, whose time derivative at the crossing is `v̄ = sweep_rate / 2`,
/// so the estimate is `exp(-π ε² / sweep_rate)`.
pub fn landau_zener_probability(epsilon: f64, sweep_rate: f64) -> Result<f64> {
    check_positive("epsilon", epsilon)?;
    check_positive("sweep_rate", sweep_rate)?;
    let splitting_rate = 0.5 * sweep_rate;
    Ok((-PI * epsilon * epsilon / (2.0 * splitting_rate)).exp())
}

/// `Tr(ρ(t) P_ref)` with the reference resampled at the nearest parameter value.
pub fn fidelity_trace(record: &EvolutionRecord, reference: &BlochPath) -> Result<Vec<f64>> {
    let params = &reference.params;
    if params.is_empty() || params.len() != reference.samples.len() {
        return Err(HolonomyError::GridMismatch("reference path is empty or malformed".into()));
    }
    if params.windows(2).any(|w| w[1] < w[0]) {
        return Err(HolonomyError::GridMismatch("reference parameters are not sorted".into()));
    }
    let spacing = params.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max).max(1e-9);
    record
        .states
        .iter()
        .zip(&record.lambdas)
        .map(|(state, &lambda)| {
            let idx = params.partition_point(|&p| p < lambda);
            let nearest = [idx.saturating_sub(1), idx.min(params.len() - 1)]
                .into_iter()
                .min_by(|&a, &b| (params[a] - lambda).abs().total_cmp(&(params[b] - lambda).abs()))
                .expect("two candidates");
            if (params[nearest] - lambda).abs() > spacing {
                return Err(HolonomyError::GridMismatch(format!(
                    "lambda {lambda} is outside the reference range [{}, {}]",
                    params[0],
                    params[params.len() - 1]
                )));
            }
            Ok(state.fidelity(&reference.samples[nearest]))
        })
        .collect()
}

/// Outcome of a dynamical run around one cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "regime", content = "permutation", rename_all = "snake_case")]
pub enum Verdict {
    Adiabatic(Permutation),
    Diabatic(Permutation),
    Unresolved,
}

impl Verdict {
    pub fn permutation(&self) -> Option<Permutation> {
        match self {
            Verdict::Adiabatic(p) | Verdict::Diabatic(p) => Some(*p),
            Verdict::Unresolved => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Adiabatic(p) => write!(f, "{p}"),
            Verdict::Diabatic(p) => write!(f, "{p} (diabatic)"),
            Verdict::Unresolved => f.write_str("unresolved"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub verdict: Verdict,
    /// Final fidelity with the continued eigenprojector.
    pub tracked_fidelity: f64,
    /// Permutation carried by the continued eigenprojector itself.
    pub tracked_permutation: Permutation,
    /// Final fidelity with the initial eigenprojector.
    pub initial_branch_fidelity: f64,
    /// Final fidelity with the unperturbed crossing branch (perturbed model only).
    pub diabatic_fidelity: Option<f64>,
    pub landau_zener_estimate: Option<f64>,
    pub max_norm_drift: f64,
}

fn permutation_between(start: &BlochVector, end: &BlochVector) -> Permutation {
    if start.dot(end) >= 0.0 {
        Permutation::Identity
    } else {
        Permutation::Swap
    }
}

/// Classifies a continuous run of one of the bundled Hamiltonian models.
pub fn summarize_continuous(
    model: &HamiltonianModel,
    schedule: &SweepSchedule,
    record: &EvolutionRecord,
) -> RunSummary {
    let start = *record.reference.start();
    let tracked_permutation = permutation_between(&start, record.reference.end());
    let tracked_fidelity = record.final_fidelity();
    let final_state = record.final_state();

    let (diabatic_fidelity, landau_zener_estimate) = match model {
        HamiltonianModel::Crossing => (None, None),
        HamiltonianModel::Perturbed { epsilon } => {
            let lambda0 = record.lambdas[0];
            let branch0 = analytic_bloch_crossing(lambda0);
            let sign = if branch0.dot(&start) >= 0.0 { 1.0 } else { -1.0 };
            let lambda_end = record.lambdas[record.lambdas.len() - 1];
            let branch_end = analytic_bloch_crossing(lambda_end);
            let target = if sign > 0.0 { branch_end } else { -branch_end };
            (Some(final_state.fidelity(&target)), landau_zener_probability(*epsilon, schedule.crossing_rate()).ok())
        }
    };

    let verdict = if tracked_fidelity >= ADIABATIC_FIDELITY {
        Verdict::Adiabatic(tracked_permutation)
    } else if diabatic_fidelity.is_some_and(|f| f >= DIABATIC_FIDELITY) {
        let branch_start = analytic_bloch_crossing(record.lambdas[0]);
        let branch_end = analytic_bloch_crossing(record.lambdas[record.lambdas.len() - 1]);
        Verdict::Diabatic(permutation_between(&branch_start, &branch_end))
    } else {
        Verdict::Unresolved
    };

    RunSummary {
        verdict,
        tracked_fidelity,
        tracked_permutation,
        initial_branch_fidelity: final_state.fidelity(&start),
        diabatic_fidelity,
        landau_zener_estimate,
        max_norm_drift: record.max_norm_drift(),
    }
}

/// Largest `|λ_{n+1} - λ_n|` of a kicked record and the smallest quasienergy
/// gap (on the circle) met along it.
pub fn kick_adiabaticity(map: &FloquetMap, record: &EvolutionRecord) -> (f64, f64) {
    // Entries 1.. are the applied kick parameters.
    let applied = &record.lambdas[1..];
    let max_step = applied.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    let min_gap = applied
        .iter()
        .map(|&l| {
            let (t1, t2) = map.spectrum(l).levels;
            let d = (t1 - t2).abs() % (2.0 * PI);
            d.min(2.0 * PI - d)
        })
        .fold(f64::INFINITY, f64::min);
    (max_step, min_gap)
}

/// Classifies a kicked run. No permutation is claimed when the kicks are too
/// coarse for the gap (see [`KICK_STEP_FRACTION`]), whatever the fidelity.
pub fn summarize_kicked(map: &FloquetMap, record: &EvolutionRecord) -> RunSummary {
    let start = *record.reference.start();
    let tracked_permutation = permutation_between(&start, record.reference.end());
    let tracked_fidelity = record.final_fidelity();
    let (max_step, min_gap) = kick_adiabaticity(map, record);
    let slow = max_step <= KICK_STEP_FRACTION * min_gap;
    let verdict = if slow && tracked_fidelity >= ADIABATIC_FIDELITY {
        Verdict::Adiabatic(tracked_permutation)
    } else {
        Verdict::Unresolved
    };
    RunSummary {
        verdict,
        tracked_fidelity,
        tracked_permutation,
        initial_branch_fidelity: record.final_state().fidelity(&start),
        diabatic_fidelity: None,
        landau_zener_estimate: None,
        max_norm_drift: record.max_norm_drift(),
    }
}
