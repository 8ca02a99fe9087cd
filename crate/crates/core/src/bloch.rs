//! Bloch vectors (points of S²), directors (points of RP²) and the
//! covering projection between them.

use std::ops::Neg;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::algebra::{norm3, pauli, Axis, ComplexMatrix2};
use crate::error::{HolonomyError, Result};

/// Two directors closer than this (up to sign) are considered equal.
pub const CLOSURE_TOL: f64 = 1e-6;

/// Components below this are skipped when choosing the canonical sign.
const CANONICAL_ZERO: f64 = 1e-12;

const MIN_NORM: f64 = 1e-6;
const PROJECTOR_TOL: f64 = 1e-9;

/// A unit 3-vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct BlochVector([f64; 3]);

impl BlochVector {
    /// Normalizes `(x, y, z)`; fails when the norm is below `1e-6`.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::from_array([x, y, z])
    }

    pub fn from_array(v: [f64; 3]) -> Result<Self> {
        let n = norm3(&v);
        if !n.is_finite() || n < MIN_NORM {
            return Err(HolonomyError::ZeroVector { norm: n });
        }
        Ok(BlochVector([v[0] / n, v[1] / n, v[2] / n]))
    }

    /// Caller guarantees unit norm.
    pub(crate) fn from_unit_unchecked(v: [f64; 3]) -> Self {
        BlochVector(v)
    }

    pub fn e_x() -> Self {
        BlochVector([1.0, 0.0, 0.0])
    }

    pub fn e_y() -> Self {
        BlochVector([0.0, 1.0, 0.0])
    }

    pub fn e_z() -> Self {
        BlochVector([0.0, 0.0, 1.0])
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn cross(&self, other: &BlochVector) -> [f64; 3] {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        [a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1]
    }

    /// Euclidean distance `|a - b|`.
    pub fn distance(&self, other: &BlochVector) -> f64 {
        let d = [self.0[0] - other.0[0], self.0[1] - other.0[1], self.0[2] - other.0[2]];
        norm3(&d)
    }

    /// `a·σ`.
    pub fn sigma(&self) -> ComplexMatrix2 {
        ComplexMatrix2::hermitian_from_real(0.0, self.0)
    }
}

impl Neg for BlochVector {
    type Output = BlochVector;
    fn neg(self) -> BlochVector {
        BlochVector([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl TryFrom<[f64; 3]> for BlochVector {
    type Error = HolonomyError;
    fn try_from(v: [f64; 3]) -> Result<Self> {
        Self::from_array(v)
    }
}

impl From<BlochVector> for [f64; 3] {
    fn from(a: BlochVector) -> [f64; 3] {
        a.0
    }
}

/// A headless unit vector `{a, -a}`, stored by its canonical representative:
/// the first component (x, y, z order) with `|c| >= 1e-12` is positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Director(BlochVector);

impl Director {
    pub fn representative(&self) -> BlochVector {
        self.0
    }

    /// `min(|n - n'|, |n + n'|)`.
    pub fn distance(&self, other: &Director) -> f64 {
        let d = self.0.distance(&other.0);
        let s = self.0.distance(&-other.0);
        d.min(s)
    }

    pub fn approx_eq(&self, other: &Director) -> bool {
        self.distance(other) <= CLOSURE_TOL
    }

    /// `|n · n'|`, the sign-free overlap.
    pub fn overlap(&self, other: &Director) -> f64 {
        self.0.dot(&other.0).abs()
    }
}

fn canonicalize(a: &BlochVector) -> BlochVector {
    let first = a.0.iter().copied().find(|c| c.abs() >= CANONICAL_ZERO);
    match first {
        Some(c) if c < 0.0 => -*a,
        _ => *a,
    }
}

/// The double cover S² → RP².
pub fn covering_projection(a: &BlochVector) -> Director {
    Director(canonicalize(a))
}

/// `(P1, P2)` with `P1 = (1 + a·σ)/2`, `P2 = (1 - a·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderedProjectorPair {
    pub first: ComplexMatrix2,
    pub second: ComplexMatrix2,
}

impl OrderedProjectorPair {
    pub fn swapped(&self) -> Self {
        OrderedProjectorPair { first: self.second, second: self.first }
    }
}

pub fn projectors_from_bloch(a: &BlochVector) -> OrderedProjectorPair {
    let half = 0.5;
    let [x, y, z] = a.0;
    let first = ComplexMatrix2::hermitian_from_real(half, [half * x, half * y, half * z]);
    let second = ComplexMatrix2::identity() - first;
    OrderedProjectorPair { first, second }
}

/// Inverse of the projector formula: `a_k = Tr(P σ_k)`.
pub fn bloch_from_projector(p: &ComplexMatrix2) -> Result<BlochVector> {
    let idempotency = (*p * *p).max_abs_diff(p);
    let trace = (p.trace() - C64::from(1.0)).norm();
    let herm = p.hermiticity_defect();
    let defect = idempotency.max(trace).max(herm);
    if defect > PROJECTOR_TOL {
        return Err(HolonomyError::NotAProjector { defect });
    }
    let comps = Axis::ALL.map(|ax| (*p * pauli(ax)).trace().re);
    BlochVector::from_array(comps).map_err(|_| HolonomyError::NotAProjector { defect })
}

/// `E1 P1(a) + E2 P2(a)`.
pub fn hamiltonian_from_spectrum(e1: f64, e2: f64, a: &BlochVector) -> ComplexMatrix2 {
    let c = 0.5 * (e1 + e2);
    let r = 0.5 * (e1 - e2);
    let [x, y, z] = a.0;
    ComplexMatrix2::hermitian_from_real(c, [r * x, r * y, r * z])
}
