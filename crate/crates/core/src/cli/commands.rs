//! Subcommand implementations. Each returns the text printed on stdout.

use std::fmt::Write as _;
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{ScenarioConfig, SweepAxis};
use super::output::{format_float, Cell, Table};
use super::CliError;
use crate::bloch::BlochVector;
use crate::deform::{deform_path, SmoothRotationField};
use crate::dynamics::{
    evolve_continuous, evolve_kicked, kick_sequence, summarize_continuous, summarize_kicked, EvolutionRecord,
    RunSummary, StateVector, SweepSchedule,
};
use crate::lift::{holonomy, DirectorPath, HolonomyResult};
use crate::models::{analytic_bloch_crossing, linspace, HamiltonianModel, ModelKind, ParametricModel};

pub(crate) struct Context {
    pub config: ScenarioConfig,
    pub hash: String,
}

impl Context {
    fn write(&self, table: &Table, stem: &str) -> Result<PathBuf, CliError> {
        table
            .write(&self.config.output.dir, stem, self.config.output.format, &self.hash)
            .map_err(|e| CliError::Io(format!("writing {stem}: {e}")))
    }
}

/// Samples the configured cycle, applying the seeded deformation if any.
fn cycle_path(config: &ScenarioConfig, model: &ParametricModel, samples: usize) -> Result<DirectorPath, CliError> {
    let cycle = &config.cycle;
    let path = model.director_path(cycle.lambda_start, cycle.lambda_end(), samples)?;
    match &cycle.deformation {
        None => Ok(path),
        Some(d) => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let field = SmoothRotationField::random(&mut rng, d.amplitude, d.modes)?;
            Ok(deform_path(&path, &field)?)
        }
    }
}

fn classify_once(
    config: &ScenarioConfig,
    model: &ParametricModel,
    samples: usize,
) -> Result<(DirectorPath, HolonomyResult), CliError> {
    let path = cycle_path(config, model, samples)?;
    let a0 = path.start().representative();
    let result = holonomy(&path, &a0)?;
    Ok((path, result))
}

pub(crate) fn classify(ctx: &Context) -> Result<String, CliError> {
    let config = &ctx.config;
    let model = config.build_model()?;
    let (path, result) = classify_once(config, &model, config.cycle.samples)?;

    let mut report = Table::new(vec![
        "model",
        "lambda_start",
        "lambda_end",
        "samples",
        "permutation",
        "homotopy_class",
        "endpoint_defect",
        "endpoint_gap",
        "min_adjacent_overlap",
    ]);
    report.push(vec![
        model.kind().as_str().into(),
        config.cycle.lambda_start.into(),
        config.cycle.lambda_end().into(),
        result.sample_count.into(),
        result.permutation.as_str().into(),
        result.homotopy_class.as_str().into(),
        result.endpoint_defect.into(),
        result.endpoint_gap.into(),
        result.min_adjacent_overlap.into(),
    ]);
    let mut out = String::new();
    let written = ctx.write(&report, "classify")?;
    writeln!(out, "permutation: {}", result.permutation).unwrap();
    writeln!(out, "homotopy_class: {}", result.homotopy_class.as_str()).unwrap();
    writeln!(out, "endpoint_defect: {}", format_float(result.endpoint_defect)).unwrap();
    writeln!(out, "samples: {}", result.sample_count).unwrap();
    writeln!(out, "wrote: {}", written.display()).unwrap();

    if config.output.emit_path {
        let mut table = Table::new(vec!["lambda", "n_x", "n_y", "n_z"]);
        for (d, &p) in path.samples().iter().zip(path.params()) {
            let n = d.representative();
            table.push(vec![p.into(), n.x().into(), n.y().into(), n.z().into()]);
        }
        let written = ctx.write(&table, "director_path")?;
        writeln!(out, "wrote: {}", written.display()).unwrap();
    }
    Ok(out)
}

pub(crate) fn spectrum(ctx: &Context) -> Result<String, CliError> {
    let config = &ctx.config;
    let model = config.build_model()?;
    let mut table = Table::new(vec!["lambda", "E1", "E2"]);
    for lambda in linspace(config.cycle.lambda_start, config.cycle.lambda_end(), config.cycle.samples) {
        let s = model.spectrum_at(lambda);
        table.push(vec![lambda.into(), s.levels.0.into(), s.levels.1.into()]);
    }
    let written = ctx.write(&table, "spectrum")?;
    Ok(format!("rows: {}\nwrote: {}\n", table.rows.len(), written.display()))
}

/// One dynamical run of the configured model.
struct Run {
    record: EvolutionRecord,
    summary: RunSummary,
    /// Per-sample fidelity with the unperturbed crossing branch.
    diabatic_trace: Option<Vec<f64>>,
}

fn run_dynamics(config: &ScenarioConfig, model: &ParametricModel, schedule: &SweepSchedule) -> Result<Run, CliError> {
    match model {
        ParametricModel::Hamiltonian(h) => {
            let a0 = h.branch_bloch(schedule.lambda_at(0.0), config.initial_branch)?;
            let psi0 = StateVector::from_bloch(&a0);
            let record = evolve_continuous(h, schedule, psi0, config.schedule.dt)?;
            let summary = summarize_continuous(h, schedule, &record);
            let diabatic_trace = match h {
                HamiltonianModel::Perturbed { .. } => {
                    let sign = analytic_bloch_crossing(record.lambdas[0]).dot(&a0).signum();
                    Some(
                        record
                            .states
                            .iter()
                            .zip(&record.lambdas)
                            .map(|(s, &l)| {
                                let b = analytic_bloch_crossing(l).components().map(|x| sign * x);
                                s.fidelity(&BlochVector::from_array(b).expect("unit vector"))
                            })
                            .collect(),
                    )
                }
                HamiltonianModel::Crossing => None,
            };
            Ok(Run { record, summary, diabatic_trace })
        }
        ParametricModel::Floquet(map) => {
            let start = config.cycle.lambda_start;
            let span = config.cycle.lambda_end() - start;
            let lambdas = kick_sequence(start, span, config.schedule.kicks);
            let a0 = map.branch_bloch(start, config.initial_branch)?;
            let record = evolve_kicked(map, &lambdas, StateVector::from_bloch(&a0))?;
            let summary = summarize_kicked(map, &record);
            Ok(Run { record, summary, diabatic_trace: None })
        }
    }
}

fn summary_table(model: &ParametricModel, steps: usize, summary: &RunSummary) -> Table {
    let mut table = Table::new(vec![
        "model",
        "steps",
        "verdict",
        "tracked_fidelity",
        "tracked_permutation",
        "initial_branch_fidelity",
        "diabatic_fidelity",
        "landau_zener_estimate",
        "max_norm_drift",
    ]);
    table.push(vec![
        model.kind().as_str().into(),
        steps.into(),
        summary.verdict.to_string().into(),
        summary.tracked_fidelity.into(),
        summary.tracked_permutation.as_str().into(),
        summary.initial_branch_fidelity.into(),
        summary.diabatic_fidelity.into(),
        summary.landau_zener_estimate.into(),
        summary.max_norm_drift.into(),
    ]);
    table
}

pub(crate) fn simulate(ctx: &Context) -> Result<String, CliError> {
    let config = &ctx.config;
    let model = config.build_model()?;
    let schedule = config.schedule.build()?;
    let run = run_dynamics(config, &model, &schedule)?;
    let record = &run.record;

    let mut series =
        Table::new(vec!["t", "lambda", "re_c0", "im_c0", "re_c1", "im_c1", "tracked_fidelity", "diabatic_fidelity"]);
    let stride = config.schedule.record_stride;
    let last = record.len() - 1;
    for i in (0..record.len()).filter(|&i| i % stride == 0 || i == last) {
        let [c0, c1] = record.states[i].components();
        let diabatic = run.diabatic_trace.as_ref().map(|d| d[i]);
        series.push(vec![
            record.times[i].into(),
            record.lambdas[i].into(),
            c0.re.into(),
            c0.im.into(),
            c1.re.into(),
            c1.im.into(),
            record.projector_fidelities[i].into(),
            diabatic.into(),
        ]);
    }
    let series_path = ctx.write(&series, "simulation")?;
    let summary = summary_table(&model, last, &run.summary);
    let summary_path = ctx.write(&summary, "simulation_summary")?;

    let s = &run.summary;
    let mut out = String::new();
    writeln!(out, "verdict: {}", s.verdict).unwrap();
    writeln!(out, "tracked_fidelity: {}", format_float(s.tracked_fidelity)).unwrap();
    writeln!(out, "tracked_permutation: {}", s.tracked_permutation).unwrap();
    if let Some(f) = s.diabatic_fidelity {
        writeln!(out, "diabatic_fidelity: {}", format_float(f)).unwrap();
    }
    if let Some(p) = s.landau_zener_estimate {
        writeln!(out, "landau_zener_estimate: {}", format_float(p)).unwrap();
    }
    writeln!(out, "max_norm_drift: {}", format_float(s.max_norm_drift)).unwrap();
    writeln!(out, "wrote: {}", series_path.display()).unwrap();
    writeln!(out, "wrote: {}", summary_path.display()).unwrap();
    Ok(out)
}

fn sweep_row(config: &ScenarioConfig, axis: SweepAxis, value: f64) -> Result<Vec<Cell>, CliError> {
    match axis {
        SweepAxis::Epsilon => {
            let model = ParametricModel::perturbed(value)?;
            let schedule = config.schedule.build()?;
            dynamic_row(config, &model, &schedule, value)
        }
        SweepAxis::Rate => {
            let model = config.build_model()?;
            let schedule = SweepSchedule::with_crossing_rate(config.schedule.kind(), value)?;
            dynamic_row(config, &model, &schedule, value)
        }
        SweepAxis::Samples => {
            let model = config.build_model()?;
            let (_, result) = classify_once(config, &model, value as usize)?;
            Ok(vec![
                value.into(),
                result.permutation.as_str().into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                result.endpoint_defect.into(),
            ])
        }
    }
}

fn dynamic_row(
    config: &ScenarioConfig,
    model: &ParametricModel,
    schedule: &SweepSchedule,
    value: f64,
) -> Result<Vec<Cell>, CliError> {
    let run = run_dynamics(config, model, schedule)?;
    let s = run.summary;
    Ok(vec![
        value.into(),
        s.verdict.to_string().into(),
        s.tracked_fidelity.into(),
        s.diabatic_fidelity.into(),
        s.landau_zener_estimate.into(),
        Cell::Empty,
    ])
}

pub(crate) fn sweep(ctx: &Context, threads: Option<usize>) -> Result<String, CliError> {
    let config = &ctx.config;
    let axis = config.sweep.axis;
    match axis {
        SweepAxis::Rate if config.model.kind != ModelKind::Perturbed => {
            return Err(CliError::Config("a rate sweep needs model.kind = perturbed".into()));
        }
        SweepAxis::Epsilon | SweepAxis::Rate if config.sweep.values.iter().any(|&v| v <= 0.0) => {
            return Err(CliError::Config(format!("{} values must be positive", axis.as_str())));
        }
        SweepAxis::Samples if config.sweep.values.iter().any(|&v| v < 2.0 || v.fract() != 0.0) => {
            return Err(CliError::Config("samples values must be integers >= 2".into()));
        }
        _ => {}
    }

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let rows: Vec<Vec<Cell>> =
        pool.install(|| config.sweep.values.par_iter().map(|&v| sweep_row(config, axis, v)).collect::<Result<_, _>>())?;

    let mut table = Table::new(vec![
        "value",
        "verdict",
        "final_fidelity",
        "diabatic_fidelity",
        "landau_zener_estimate",
        "endpoint_defect",
    ]);
    let mut out = String::new();
    for row in rows {
        if let (Cell::Num(v), Cell::Text(verdict)) = (&row[0], &row[1]) {
            writeln!(out, "{} = {}: {}", axis.as_str(), format_float(*v), verdict).unwrap();
        }
        table.push(row);
    }
    let written = ctx.write(&table, &format!("sweep_{}", axis.as_str()))?;
    writeln!(out, "wrote: {}", written.display()).unwrap();
    Ok(out)
}
