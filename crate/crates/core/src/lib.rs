//! Numerical tools for eigenspace anholonomy in two-level quantum systems.
//!
//! A closed cycle of a parameter `λ` can exchange the eigenprojectors of a
//! Hamiltonian or Floquet operator. For two levels an eigenprojector is a
//! Bloch vector `a` on the sphere, the unordered pair of eigenprojectors is the
//! director `{a, -a}` in the real projective plane, and the exchange is read
//! off by lifting the director loop back to the sphere.
//!
//! - [`algebra`]: closed-form 2×2 complex linear algebra.
//! - [`bloch`]: Bloch vectors, directors, projectors and the covering map.
//! - [`lift`]: path lifting and holonomy classification.
//! - [`models`]: the kicked Floquet map, the exact crossing and the avoided crossing.
//! - [`dynamics`]: time evolution and projector-fidelity tracking.
//! - [`cli`]: scenario configuration, subcommands and CSV/JSON output.

pub mod algebra;
pub mod bloch;
pub mod cli;
pub mod deform;
pub mod dynamics;
pub mod error;
pub mod lift;
pub mod models;

pub use algebra::{eig_hermitian_2x2, eig_unitary_2x2, expm_i_hermitian, pauli, Axis, ComplexMatrix2};
pub use bloch::{
    bloch_from_projector, covering_projection, hamiltonian_from_spectrum, projectors_from_bloch, BlochVector, Director,
    OrderedProjectorPair, CLOSURE_TOL,
};
pub use error::{HolonomyError, Result};
pub use lift::{concatenate, holonomy, lift_path, BlochPath, DirectorPath, HolonomyResult, HomotopyClass, Permutation};
pub use models::{FloquetMap, HamiltonianModel, ModelKind, ParametricModel};
