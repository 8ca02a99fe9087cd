//! Scenario configuration: one JSON document with embedded defaults.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bloch::BlochVector;
use crate::cli::CliError;
use crate::dynamics::{ScheduleKind, SweepSchedule, DEFAULT_KICKS};
use crate::models::{
    Branch, FloquetMap, HamiltonianModel, ModelKind, ParametricModel, DEFAULT_EPSILON, DEFAULT_SAMPLES, PERIOD,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: ModelConfig,
    pub cycle: CycleConfig,
    pub schedule: ScheduleConfig,
    pub initial_branch: Branch,
    pub output: OutputConfig,
    /// Seeds the optional path deformation.
    pub seed: u64,
    pub sweep: SweepConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: ModelKind,
    /// Avoided-crossing strength of the perturbed model.
    pub epsilon: f64,
    /// Floquet map: `H0 = h0_scale · (h0_axis · σ)`.
    pub h0_scale: f64,
    pub h0_axis: [f64; 3],
    /// Floquet map: `|v><v| = (1 + kick_axis · σ)/2`.
    pub kick_axis: [f64; 3],
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            kind: ModelKind::Crossing,
            epsilon: DEFAULT_EPSILON,
            h0_scale: PI / 2.0,
            h0_axis: [0.0, 1.0, 0.0],
            kick_axis: [1.0, 0.0, 0.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CycleConfig {
    pub lambda_start: f64,
    /// Length of the `λ` range in units of the model period `2π`.
    pub periods: f64,
    /// Samples over the whole range, endpoints included.
    pub samples: usize,
    pub deformation: Option<DeformationConfig>,
}

impl Default for CycleConfig {
    fn default() -> Self {
        CycleConfig { lambda_start: 0.0, periods: 1.0, samples: DEFAULT_SAMPLES, deformation: None }
    }
}

impl CycleConfig {
    pub fn lambda_end(&self) -> f64 {
        self.lambda_start + self.periods * PERIOD
    }
}

/// Random smooth closed rotation of the classified path, drawn from `seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeformationConfig {
    /// Largest rotation angle in radians.
    pub amplitude: f64,
    pub modes: usize,
}

impl Default for DeformationConfig {
    fn default() -> Self {
        DeformationConfig { amplitude: 0.05, modes: 3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKindName {
    Uniform,
    DiabaticWindow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleConfig {
    pub kind: ScheduleKindName,
    pub total_time: f64,
    /// When set, `dλ/dt` at `λ = π`; `total_time` is then derived from it.
    pub crossing_rate: Option<f64>,
    pub dt: f64,
    pub half_width: f64,
    pub rate_multiplier: f64,
    /// Kicks per run of the Floquet map.
    pub kicks: usize,
    /// Keep every n-th sample in the time-series output.
    pub record_stride: usize,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig {
            kind: ScheduleKindName::Uniform,
            total_time: 2000.0,
            crossing_rate: None,
            dt: 0.01,
            half_width: 0.3,
            rate_multiplier: 4.0,
            kicks: DEFAULT_KICKS,
            record_stride: 100,
        }
    }
}

impl ScheduleConfig {
    pub fn kind(&self) -> ScheduleKind {
        match self.kind {
            ScheduleKindName::Uniform => ScheduleKind::Uniform,
            ScheduleKindName::DiabaticWindow => {
                ScheduleKind::DiabaticWindow { half_width: self.half_width, rate_multiplier: self.rate_multiplier }
            }
        }
    }

    pub fn build(&self) -> crate::Result<SweepSchedule> {
        match self.crossing_rate {
            Some(rate) => SweepSchedule::with_crossing_rate(self.kind(), rate),
            None => SweepSchedule::from_kind(self.kind(), self.total_time),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub format: OutputFormat,
    /// Also write the sampled director path from `classify`.
    pub emit_path: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: PathBuf::from("out"), format: OutputFormat::Csv, emit_path: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Epsilon,
    Rate,
    Samples,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::Epsilon => "epsilon",
            SweepAxis::Rate => "rate",
            SweepAxis::Samples => "samples",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { axis: SweepAxis::Epsilon, values: vec![0.02, 0.05, 0.1, 0.2, 0.5] }
    }
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            model: ModelConfig::default(),
            cycle: CycleConfig::default(),
            schedule: ScheduleConfig::default(),
            initial_branch: Branch::Upper,
            output: OutputConfig::default(),
            seed: 0,
            sweep: SweepConfig::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the compact JSON form, with the output directory blanked so
    /// the hash only covers what determines the numbers.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output.dir = PathBuf::new();
        let json = serde_json::to_string(&canonical).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    /// Checks numeric fields; does not touch the filesystem.
    pub fn validate(&self) -> Result<(), CliError> {
        let finite = [
            ("model.epsilon", self.model.epsilon),
            ("model.h0_scale", self.model.h0_scale),
            ("cycle.lambda_start", self.cycle.lambda_start),
            ("cycle.periods", self.cycle.periods),
            ("schedule.total_time", self.schedule.total_time),
            ("schedule.dt", self.schedule.dt),
            ("schedule.half_width", self.schedule.half_width),
            ("schedule.rate_multiplier", self.schedule.rate_multiplier),
        ];
        let vectors = [("model.h0_axis", self.model.h0_axis), ("model.kick_axis", self.model.kick_axis)];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(CliError::Config(format!("{name} must be finite")));
            }
        }
        for (name, v) in vectors {
            if v.iter().any(|x| !x.is_finite()) {
                return Err(CliError::Config(format!("{name} must be finite")));
            }
        }
        if self.sweep.values.iter().any(|x| !x.is_finite()) {
            return Err(CliError::Config("sweep.values must be finite".into()));
        }
        if self.cycle.samples < 2 {
            return Err(CliError::Config("cycle.samples must be at least 2".into()));
        }
        if self.cycle.periods <= 0.0 {
            return Err(CliError::Config("cycle.periods must be positive".into()));
        }
        if self.model.kind == ModelKind::Perturbed && self.model.epsilon <= 0.0 {
            return Err(CliError::Config("model.epsilon must be positive".into()));
        }
        if let Some(rate) = self.schedule.crossing_rate {
            if !(rate > 0.0 && rate.is_finite()) {
                return Err(CliError::Config("schedule.crossing_rate must be positive".into()));
            }
        }
        if self.schedule.dt <= 0.0 || self.schedule.total_time <= 0.0 {
            return Err(CliError::Config("schedule.dt and schedule.total_time must be positive".into()));
        }
        if self.schedule.kicks == 0 || self.schedule.record_stride == 0 {
            return Err(CliError::Config("schedule.kicks and schedule.record_stride must be positive".into()));
        }
        if self.schedule.kind == ScheduleKindName::DiabaticWindow
            && !(self.schedule.half_width > 0.0 && self.schedule.half_width < PI && self.schedule.rate_multiplier > 0.0)
        {
            return Err(CliError::Config("diabatic window needs 0 < half_width < pi and rate_multiplier > 0".into()));
        }
        if let Some(d) = &self.cycle.deformation {
            if !(d.amplitude >= 0.0 && d.amplitude.is_finite()) {
                return Err(CliError::Config("cycle.deformation.amplitude must be >= 0".into()));
            }
        }
        Ok(())
    }

    /// Builds the configured model.
    pub fn build_model(&self) -> Result<ParametricModel, CliError> {
        let model = match self.model.kind {
            ModelKind::Crossing => ParametricModel::crossing(),
            ModelKind::Perturbed => {
                ParametricModel::Hamiltonian(HamiltonianModel::perturbed(self.model.epsilon).map_err(config_err)?)
            }
            ModelKind::FloquetMap => {
                let axis = BlochVector::from_array(self.model.h0_axis).map_err(config_err)?;
                let h0 = axis.sigma().scale(C64::from(self.model.h0_scale));
                let kick = BlochVector::from_array(self.model.kick_axis).map_err(config_err)?;
                ParametricModel::Floquet(FloquetMap::new(h0, kick).map_err(config_err)?)
            }
        };
        Ok(model)
    }
}

fn config_err(e: crate::HolonomyError) -> CliError {
    CliError::Config(e.to_string())
}
