//! Path lifting through the double cover S² → RP² and holonomy classification.
//!
//! A closed director path lifts to a Bloch path that either closes (the
//! contractible class, identity permutation of eigenprojectors) or ends at the
//! antipode of its start (the non-contractible class, the two eigenprojectors
//! are exchanged).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bloch::{covering_projection, BlochVector, Director, CLOSURE_TOL};
use crate::error::{HolonomyError, Result};

/// Minimum `|a_prev · n|` between adjacent samples for an unambiguous lift.
pub const STEP_CAP: f64 = 0.1;

/// Ordered samples of a path in director space, with their parameter values.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectorPath {
    samples: Vec<Director>,
    params: Vec<f64>,
    closed: bool,
}

impl DirectorPath {
    /// Builds a path; `closed` is set when the end directors agree within
    /// `CLOSURE_TOL`.
    pub fn new(samples: Vec<Director>, params: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(HolonomyError::InvalidArgument("director path has no samples".into()));
        }
        if samples.len() != params.len() {
            return Err(HolonomyError::InvalidArgument(format!(
                "{} samples but {} parameter values",
                samples.len(),
                params.len()
            )));
        }
        if let Some(p) = params.iter().find(|p| !p.is_finite()) {
            return Err(HolonomyError::InvalidArgument(format!("non-finite parameter {p}")));
        }
        let closed = samples.len() >= 2 && samples[0].approx_eq(&samples[samples.len() - 1]);
        Ok(DirectorPath { samples, params, closed })
    }

    /// Path through the projections of the given Bloch vectors.
    pub fn from_bloch(points: &[BlochVector], params: Vec<f64>) -> Result<Self> {
        Self::new(points.iter().map(covering_projection).collect(), params)
    }

    pub fn samples(&self) -> &[Director] {
        &self.samples
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn start(&self) -> &Director {
        &self.samples[0]
    }

    pub fn end(&self) -> &Director {
        &self.samples[self.samples.len() - 1]
    }

    /// Smallest `|n_i · n_{i+1}|` along the path (1.0 for a single sample).
    pub fn min_adjacent_overlap(&self) -> f64 {
        self.samples.windows(2).map(|w| w[0].overlap(&w[1])).fold(1.0, f64::min)
    }
}

/// A continuous path on the Bloch sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochPath {
    pub samples: Vec<BlochVector>,
    pub params: Vec<f64>,
}

impl BlochPath {
    pub fn start(&self) -> &BlochVector {
        &self.samples[0]
    }

    pub fn end(&self) -> &BlochVector {
        &self.samples[self.samples.len() - 1]
    }

    pub fn negated(&self) -> BlochPath {
        BlochPath { samples: self.samples.iter().map(|a| -*a).collect(), params: self.params.clone() }
    }

    pub fn min_adjacent_overlap(&self) -> f64 {
        self.samples.windows(2).map(|w| w[0].dot(&w[1])).fold(1.0, f64::min)
    }
}

/// Unique path lifting: each step keeps the sign of the representative that
/// has positive overlap with the previous lifted point.
pub fn lift_path(path: &DirectorPath, a0: &BlochVector) -> Result<BlochPath> {
    let distance = covering_projection(a0).distance(path.start());
    if distance > CLOSURE_TOL {
        return Err(HolonomyError::StartMismatch { distance });
    }
    let mut samples = Vec::with_capacity(path.len());
    let mut prev = *a0;
    samples.push(prev);
    for (i, n) in path.samples.iter().enumerate().skip(1) {
        let rep = n.representative();
        let d = prev.dot(&rep);
        if d.abs() < STEP_CAP {
            return Err(HolonomyError::StepTooLarge { index: i - 1, overlap: d.abs() });
        }
        prev = if d > 0.0 { rep } else { -rep };
        samples.push(prev);
    }
    Ok(BlochPath { samples, params: path.params.clone() })
}

/// Element of the two-element permutation group on the eigenlabels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Permutation {
    Identity,
    Swap,
}

impl Permutation {
    /// Group product (order is irrelevant, the group is abelian).
    pub fn compose(self, other: Permutation) -> Permutation {
        if self == other {
            Permutation::Identity
        } else {
            Permutation::Swap
        }
    }

    pub fn homotopy_class(self) -> HomotopyClass {
        match self {
            Permutation::Identity => HomotopyClass::E,
            Permutation::Swap => HomotopyClass::Gamma,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Permutation::Identity => "identity",
            Permutation::Swap => "swap",
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Homotopy class of a loop in RP²: contractible `[e]` or non-contractible `[γ]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HomotopyClass {
    #[serde(rename = "e_class")]
    E,
    #[serde(rename = "gamma_class")]
    Gamma,
}

impl HomotopyClass {
    pub fn as_str(self) -> &'static str {
        match self {
            HomotopyClass::E => "e_class",
            HomotopyClass::Gamma => "gamma_class",
        }
    }
}

impl fmt::Display for HomotopyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolonomyResult {
    pub permutation: Permutation,
    pub homotopy_class: HomotopyClass,
    /// Distance of the lifted endpoint from the matched target, `+a0` or `-a0`.
    pub endpoint_defect: f64,
    /// Raw `|a_end - a_start|`: about 0 for identity, about 2 for swap.
    pub endpoint_gap: f64,
    pub min_adjacent_overlap: f64,
    pub sample_count: usize,
}

pub fn holonomy(path: &DirectorPath, a0: &BlochVector) -> Result<HolonomyResult> {
    if !path.is_closed() {
        return Err(HolonomyError::NotClosed);
    }
    let lifted = lift_path(path, a0).map_err(|e| match e {
        HolonomyError::StepTooLarge { index, overlap } => HolonomyError::LiftAmbiguous { index, overlap },
        other => other,
    })?;
    let end = lifted.end();
    let same = end.distance(a0);
    let opposite = end.distance(&-*a0);
    let (permutation, endpoint_defect) = if same <= CLOSURE_TOL {
        (Permutation::Identity, same)
    } else if opposite <= CLOSURE_TOL {
        (Permutation::Swap, opposite)
    } else {
        return Err(HolonomyError::EndpointUnresolved { defect: same.min(opposite) });
    };
    Ok(HolonomyResult {
        permutation,
        homotopy_class: permutation.homotopy_class(),
        endpoint_defect,
        endpoint_gap: same,
        min_adjacent_overlap: lifted.min_adjacent_overlap(),
        sample_count: path.len(),
    })
}

/// Joins `first` and `second`, dropping the duplicated junction sample.
/// Parameters of `second` are shifted to continue from the end of `first`.
pub fn concatenate(first: &DirectorPath, second: &DirectorPath) -> Result<DirectorPath> {
    let distance = first.end().distance(second.start());
    if distance > CLOSURE_TOL {
        return Err(HolonomyError::EndpointMismatch { distance });
    }
    let offset = first.params[first.len() - 1] - second.params[0];
    let mut samples = first.samples.clone();
    let mut params = first.params.clone();
    samples.extend_from_slice(&second.samples[1..]);
    params.extend(second.params[1..].iter().map(|p| p + offset));
    DirectorPath::new(samples, params)
}

/// A closed loop of directors starting and ending at `base`: a small circle of
/// angular radius `radius` passing through `base`. Its points stay within
/// `2·radius` of `base`, so for small radii it is contractible.
pub fn small_loop(base: &BlochVector, radius: f64, n_samples: usize) -> Result<DirectorPath> {
    if n_samples < 2 {
        return Err(HolonomyError::InvalidArgument("a loop needs at least 2 samples".into()));
    }
    let (u, w) = orthonormal_frame(base);
    let b = base.components();
    let (cr, sr) = (radius.cos(), radius.sin());
    // circle center c and in-plane unit vector u' ⟂ c, with base = cos r c - sin r u'
    let center: [f64; 3] = std::array::from_fn(|k| cr * b[k] + sr * u[k]);
    let u_perp: [f64; 3] = std::array::from_fn(|k| -sr * b[k] + cr * u[k]);
    let mut points = Vec::with_capacity(n_samples);
    let mut params = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let t = 2.0 * std::f64::consts::PI * i as f64 / (n_samples - 1) as f64;
        let p: [f64; 3] = std::array::from_fn(|k| cr * center[k] - sr * (t.cos() * u_perp[k] + t.sin() * w[k]));
        points.push(BlochVector::from_array(p)?);
        params.push(t);
    }
    DirectorPath::from_bloch(&points, params)
}

/// Two unit vectors completing `a` to a right-handed orthonormal frame.
pub(crate) fn orthonormal_frame(a: &BlochVector) -> ([f64; 3], [f64; 3]) {
    let seed = if a.x().abs() < 0.9 { BlochVector::e_x() } else { BlochVector::e_y() };
    let u = BlochVector::from_array(a.cross(&seed)).expect("seed is not parallel to a");
    let w = a.cross(&u);
    (u.components(), w)
}
