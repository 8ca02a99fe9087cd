//! The three parametric two-level systems: a kicked Floquet map, a
//! Hamiltonian with an exact level crossing at `λ = π`, and its perturbation
//! into an avoided crossing. All are `2π`-periodic in `λ`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::algebra::{eig_hermitian_2x2, eig_unitary_2x2, expm_i_hermitian, pauli, Axis, ComplexMatrix2};
use crate::bloch::{bloch_from_projector, covering_projection, projectors_from_bloch, BlochVector, Director};
use crate::error::{HolonomyError, Result};
use crate::lift::DirectorPath;

pub const PERIOD: f64 = 2.0 * PI;
pub const DEFAULT_EPSILON: f64 = 0.1;
pub const DEFAULT_SAMPLES: usize = 401;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    FloquetMap,
    Crossing,
    Perturbed,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::FloquetMap => "floquet_map",
            ModelKind::Crossing => "crossing",
            ModelKind::Perturbed => "perturbed",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `a(λ) = cos(λ/2) e_y + sin(λ/2) e_z`, the smooth eigen-Bloch vector of the
/// crossing Hamiltonian belonging to `E1 = cos(λ/2)/2`.
pub fn analytic_bloch_crossing(lambda: f64) -> BlochVector {
    let (s, c) = (lambda / 2.0).sin_cos();
    BlochVector::from_unit_unchecked([0.0, c, s])
}

/// `(E1, E2) = (cos(λ/2)/2, -cos(λ/2)/2)`; the labels follow `a(λ)`, so the
/// levels cross at `λ = π` and are exchanged after a full period.
pub fn energies_crossing(lambda: f64) -> (f64, f64) {
    let e = 0.5 * (lambda / 2.0).cos();
    (e, -e)
}

/// `a(λ) = cos(λ/2) e_y - sin(λ/2) e_z`, the eigen-Bloch direction of the
/// default Floquet map.
pub fn analytic_bloch_floquet(lambda: f64) -> BlochVector {
    let (s, c) = (lambda / 2.0).sin_cos();
    BlochVector::from_unit_unchecked([0.0, c, -s])
}

/// Which eigenprojector to start from at `λ_start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    #[default]
    Upper,
    Lower,
}

/// Energies (Hamiltonian models) or quasi-energies (Floquet map) at one `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSample {
    pub lambda: f64,
    pub levels: (f64, f64),
    /// `None` at a degeneracy.
    pub director: Option<Director>,
}

/// Continuous-time Hamiltonian families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HamiltonianModel {
    /// `H(λ) = [(1 + cos λ) σ_y + sin λ σ_z] / 4`.
    Crossing,
    /// `H(λ) + ε σ_x / 2`.
    Perturbed { epsilon: f64 },
}

impl HamiltonianModel {
    pub fn perturbed(epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon <= 0.0 {
            return Err(HolonomyError::NonPositiveInput { name: "epsilon", value: epsilon });
        }
        Ok(HamiltonianModel::Perturbed { epsilon })
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            HamiltonianModel::Crossing => ModelKind::Crossing,
            HamiltonianModel::Perturbed { .. } => ModelKind::Perturbed,
        }
    }

    fn pauli_vector(&self, lambda: f64) -> [f64; 3] {
        let (s, c) = lambda.sin_cos();
        let x = match self {
            HamiltonianModel::Crossing => 0.0,
            HamiltonianModel::Perturbed { epsilon } => 0.5 * epsilon,
        };
        [x, 0.25 * (1.0 + c), 0.25 * s]
    }

    pub fn hamiltonian(&self, lambda: f64) -> ComplexMatrix2 {
        ComplexMatrix2::hermitian_from_real(0.0, self.pauli_vector(lambda))
    }

    /// The crossing model uses the analytic direction, which stays defined at
    /// `λ = π` where the numerical eigensolver reports a degeneracy.
    pub fn eigen_director(&self, lambda: f64) -> Option<Director> {
        match self {
            HamiltonianModel::Crossing => Some(covering_projection(&analytic_bloch_crossing(lambda))),
            HamiltonianModel::Perturbed { .. } => eig_hermitian_2x2(&self.hamiltonian(lambda))
                .expect("model Hamiltonians are Hermitian")
                .bloch
                .map(|a| covering_projection(&a)),
        }
    }

    pub fn spectrum(&self, lambda: f64) -> SpectrumSample {
        match self {
            HamiltonianModel::Crossing => {
                SpectrumSample { lambda, levels: energies_crossing(lambda), director: self.eigen_director(lambda) }
            }
            HamiltonianModel::Perturbed { .. } => {
                let eig = eig_hermitian_2x2(&self.hamiltonian(lambda)).expect("model Hamiltonians are Hermitian");
                SpectrumSample {
                    lambda,
                    levels: (eig.upper, eig.lower),
                    director: eig.bloch.map(|a| covering_projection(&a)),
                }
            }
        }
    }

    /// Bloch vector of the requested eigenprojector at `λ`.
    pub fn branch_bloch(&self, lambda: f64, branch: Branch) -> Result<BlochVector> {
        let upper = match self {
            HamiltonianModel::Crossing => {
                let (e1, _) = energies_crossing(lambda);
                if 2.0 * e1.abs() < crate::algebra::GAP_TOL {
                    return Err(HolonomyError::DegeneracyOnPath { lambda });
                }
                let a = analytic_bloch_crossing(lambda);
                if e1 > 0.0 {
                    a
                } else {
                    -a
                }
            }
            HamiltonianModel::Perturbed { .. } => {
                eig_hermitian_2x2(&self.hamiltonian(lambda))?.bloch.ok_or(HolonomyError::DegeneracyOnPath { lambda })?
            }
        };
        Ok(match branch {
            Branch::Upper => upper,
            Branch::Lower => -upper,
        })
    }
}

/// `U(λ) = exp(-i H0) exp(-i λ |v><v|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloquetMap {
    h0: ComplexMatrix2,
    kick: BlochVector,
    free: ComplexMatrix2,
}

impl FloquetMap {
    /// `H0` Hermitian, `|v><v| = (1 + kick·σ)/2`.
    pub fn new(h0: ComplexMatrix2, kick: BlochVector) -> Result<Self> {
        let free = expm_i_hermitian(&h0, 1.0)?;
        Ok(FloquetMap { h0, kick, free })
    }

    /// Builds the map from an explicit rank-1 projector `|v><v|`.
    pub fn from_projector(h0: ComplexMatrix2, kick_projector: &ComplexMatrix2) -> Result<Self> {
        Self::new(h0, bloch_from_projector(kick_projector)?)
    }

    pub fn h0(&self) -> &ComplexMatrix2 {
        &self.h0
    }

    pub fn kick_projector(&self) -> ComplexMatrix2 {
        projectors_from_bloch(&self.kick).first
    }

    pub fn unitary(&self, lambda: f64) -> ComplexMatrix2 {
        // exp(-iλP) = I + (exp(-iλ) - 1) P for a projector P
        let p = self.kick_projector();
        let kick = ComplexMatrix2::identity() + p.scale(C64::from_polar(1.0, -lambda) - 1.0);
        self.free * kick
    }

    pub fn spectrum(&self, lambda: f64) -> SpectrumSample {
        let eig = eig_unitary_2x2(&self.unitary(lambda)).expect("Floquet operator is unitary");
        SpectrumSample {
            lambda,
            levels: (eig.theta1, eig.theta2),
            director: eig.bloch.map(|a| covering_projection(&a)),
        }
    }

    pub fn branch_bloch(&self, lambda: f64, branch: Branch) -> Result<BlochVector> {
        let upper = eig_unitary_2x2(&self.unitary(lambda))?.bloch.ok_or(HolonomyError::DegeneracyOnPath { lambda })?;
        Ok(match branch {
            Branch::Upper => upper,
            Branch::Lower => -upper,
        })
    }
}

impl Default for FloquetMap {
    /// `H0 = (π/2) σ_y`, `|v><v| = (1 + σ_x)/2`.
    fn default() -> Self {
        FloquetMap::new(pauli(Axis::Y).scale(C64::from(PI / 2.0)), BlochVector::e_x())
            .expect("default constants are valid")
    }
}

/// Any of the three systems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParametricModel {
    Hamiltonian(HamiltonianModel),
    Floquet(FloquetMap),
}

impl ParametricModel {
    pub fn crossing() -> Self {
        ParametricModel::Hamiltonian(HamiltonianModel::Crossing)
    }

    pub fn perturbed(epsilon: f64) -> Result<Self> {
        Ok(ParametricModel::Hamiltonian(HamiltonianModel::perturbed(epsilon)?))
    }

    pub fn floquet_map() -> Self {
        ParametricModel::Floquet(FloquetMap::default())
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            ParametricModel::Hamiltonian(h) => h.kind(),
            ParametricModel::Floquet(_) => ModelKind::FloquetMap,
        }
    }

    pub fn period(&self) -> f64 {
        PERIOD
    }

    /// Hamiltonian for the continuous models, Floquet operator for the map.
    pub fn operator_at(&self, lambda: f64) -> ComplexMatrix2 {
        match self {
            ParametricModel::Hamiltonian(h) => h.hamiltonian(lambda),
            ParametricModel::Floquet(f) => f.unitary(lambda),
        }
    }

    pub fn spectrum_at(&self, lambda: f64) -> SpectrumSample {
        match self {
            ParametricModel::Hamiltonian(h) => h.spectrum(lambda),
            ParametricModel::Floquet(f) => f.spectrum(lambda),
        }
    }

    pub fn director_at(&self, lambda: f64) -> Result<Director> {
        self.spectrum_at(lambda).director.ok_or(HolonomyError::DegeneracyOnPath { lambda })
    }

    pub fn branch_bloch(&self, lambda: f64, branch: Branch) -> Result<BlochVector> {
        match self {
            ParametricModel::Hamiltonian(h) => h.branch_bloch(lambda, branch),
            ParametricModel::Floquet(f) => f.branch_bloch(lambda, branch),
        }
    }

    /// Uniformly sampled eigen-director path on `[start, end]`, endpoints included.
    pub fn director_path(&self, start: f64, end: f64, n_samples: usize) -> Result<DirectorPath> {
        if n_samples < 2 {
            return Err(HolonomyError::InvalidArgument(format!("need at least 2 samples, got {n_samples}")));
        }
        let params = linspace(start, end, n_samples);
        let samples = params.iter().map(|&l| self.director_at(l)).collect::<Result<Vec<_>>>()?;
        DirectorPath::new(samples, params)
    }
}

/// `n` evenly spaced points with exact endpoints.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n).map(|i| if i == n - 1 { end } else { start + (end - start) * i as f64 / (n - 1) as f64 }).collect(),
    }
}
