//! Closed-form complex 2×2 linear algebra.
//!
//! Every Hermitian 2×2 matrix is written as `c·I + h·σ` with real `c` and a
//! real 3-vector `h`; exponentials and spectra follow directly from that
//! decomposition, so nothing here iterates.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

use crate::bloch::BlochVector;
use crate::error::{HolonomyError, Result};

/// Eigenvalue splittings below this are treated as degenerate.
pub const GAP_TOL: f64 = 1e-9;

/// Entrywise tolerance for the Hermiticity check (scaled by `max(1, |M|_max)`).
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Tolerance on `|U^dagger U - I|_max`.
pub const UNITARY_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// A 2×2 complex matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix2 {
    pub m: [[C64; 2]; 2],
}

impl ComplexMatrix2 {
    pub const fn new(m00: C64, m01: C64, m10: C64, m11: C64) -> Self {
        ComplexMatrix2 { m: [[m00, m01], [m10, m11]] }
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub fn diag(d0: C64, d1: C64) -> Self {
        Self::new(d0, ZERO, ZERO, d1)
    }

    /// `c·I + h·σ`.
    pub fn from_pauli_coefficients(c: C64, h: [C64; 3]) -> Self {
        let [hx, hy, hz] = h;
        Self::new(c + hz, hx - I * hy, hx + I * hy, c - hz)
    }

    /// `c·I + h·σ` with real coefficients; always Hermitian.
    pub fn hermitian_from_real(c: f64, h: [f64; 3]) -> Self {
        Self::from_pauli_coefficients(C64::from(c), [C64::from(h[0]), C64::from(h[1]), C64::from(h[2])])
    }

    /// Coefficients `(Tr M / 2, Tr(M σ_k) / 2)` of the Pauli expansion.
    pub fn pauli_coefficients(&self) -> (C64, [C64; 3]) {
        let [[a, b], [c, d]] = self.m;
        let half = 0.5;
        ((a + d) * half, [(b + c) * half, (b - c) * I * half, (a - d) * half])
    }

    pub fn scale(&self, s: C64) -> Self {
        let [[a, b], [c, d]] = self.m;
        Self::new(a * s, b * s, c * s, d * s)
    }

    pub fn dagger(&self) -> Self {
        let [[a, b], [c, d]] = self.m;
        Self::new(a.conj(), c.conj(), b.conj(), d.conj())
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> C64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |M_ij - N_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.dagger())
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= HERMITIAN_TOL * self.max_abs().max(1.0)
    }

    pub fn unitarity_defect(&self) -> f64 {
        (self.dagger() * *self).max_abs_diff(&Self::identity())
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_defect() <= UNITARY_TOL
    }

    /// Real Pauli decomposition `(c, h)` of a Hermitian matrix.
    pub fn hermitian_parts(&self) -> Result<(f64, [f64; 3])> {
        if !self.is_hermitian() {
            return Err(HolonomyError::NonHermitianInput { deviation: self.hermiticity_defect() });
        }
        let (c, h) = self.pauli_coefficients();
        Ok((c.re, [h[0].re, h[1].re, h[2].re]))
    }

    /// Operator norm of a Hermitian matrix, `|c| + |h|`.
    pub fn hermitian_norm(&self) -> Result<f64> {
        let (c, h) = self.hermitian_parts()?;
        Ok(c.abs() + norm3(&h))
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let [[a, b], [c, d]] = self.m;
        [a * v[0] + b * v[1], c * v[0] + d * v[1]]
    }
}

impl Default for ComplexMatrix2 {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for ComplexMatrix2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let [[a, b], [c, d]] = self.m;
        let [[e, f], [g, h]] = rhs.m;
        Self::new(a + e, b + f, c + g, d + h)
    }
}

impl Sub for ComplexMatrix2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let [[a, b], [c, d]] = self.m;
        let [[e, f], [g, h]] = rhs.m;
        Self::new(a - e, b - f, c - g, d - h)
    }
}

impl Neg for ComplexMatrix2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl Mul for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let [[a, b], [c, d]] = self.m;
        let [[e, f], [g, h]] = rhs.m;
        Self::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }
}

impl Mul<C64> for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<f64> for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(C64::from(rhs))
    }
}

impl fmt::Display for ComplexMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.m;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

pub fn pauli(axis: Axis) -> ComplexMatrix2 {
    match axis {
        Axis::X => ComplexMatrix2::new(ZERO, ONE, ONE, ZERO),
        Axis::Y => ComplexMatrix2::new(ZERO, -I, I, ZERO),
        Axis::Z => ComplexMatrix2::new(ONE, ZERO, ZERO, -ONE),
    }
}

pub(crate) fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// `exp(-i s H)` for Hermitian `H`.
///
/// With `H = c·I + h·σ`, `exp(-is H) = exp(-isc) (cos(s|h|) I - i sin(s|h|) ĥ·σ)`.
/// The `sin(s|h|)/|h|` factor is evaluated as `s·sinc(s|h|)` so `h = 0` needs
/// no special case.
pub fn expm_i_hermitian(h: &ComplexMatrix2, s: f64) -> Result<ComplexMatrix2> {
    let (c, v) = h.hermitian_parts()?;
    Ok(expm_from_parts(c, v, s))
}

pub(crate) fn expm_from_parts(c: f64, h: [f64; 3], s: f64) -> ComplexMatrix2 {
    let r = norm3(&h);
    let x = s * r;
    let sinc = if x.abs() < 1e-8 { s * (1.0 - x * x / 6.0) } else { x.sin() / r };
    let cos = x.cos();
    let phase = C64::from_polar(1.0, -s * c);
    let rot = ComplexMatrix2::from_pauli_coefficients(
        C64::from(cos),
        [-I * (sinc * h[0]), -I * (sinc * h[1]), -I * (sinc * h[2])],
    );
    rot.scale(phase)
}

/// Spectral data of a Hermitian 2×2 matrix.
///
/// `upper >= lower`. `bloch` is the Bloch vector of the eigenprojector
/// belonging to `upper`, or `None` when `upper - lower < GAP_TOL`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianEigen {
    pub upper: f64,
    pub lower: f64,
    pub bloch: Option<BlochVector>,
}

impl HermitianEigen {
    pub fn is_degenerate(&self) -> bool {
        self.bloch.is_none()
    }

    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

pub fn eig_hermitian_2x2(h: &ComplexMatrix2) -> Result<HermitianEigen> {
    let (c, v) = h.hermitian_parts()?;
    let r = norm3(&v);
    let bloch =
        if 2.0 * r < GAP_TOL { None } else { Some(BlochVector::from_unit_unchecked([v[0] / r, v[1] / r, v[2] / r])) };
    Ok(HermitianEigen { upper: c + r, lower: c - r, bloch })
}

/// Spectral data of a 2×2 unitary, `U = e^{iθ1} P1 + e^{iθ2} P2`.
///
/// Phases lie in `(-π, π]` with `theta1 >= theta2`; `bloch` belongs to `theta1`
/// and is `None` when the eigenvalues coincide within `GAP_TOL` on the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryEigen {
    pub theta1: f64,
    pub theta2: f64,
    pub bloch: Option<BlochVector>,
}

impl UnitaryEigen {
    pub fn is_degenerate(&self) -> bool {
        self.bloch.is_none()
    }
}

/// Principal value of an angle in `(-π, π]`.
pub fn wrap_phase(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

pub fn eig_unitary_2x2(u: &ComplexMatrix2) -> Result<UnitaryEigen> {
    if !u.is_unitary() {
        return Err(HolonomyError::NonUnitaryInput { deviation: u.unitarity_defect() });
    }
    // A normal matrix has c·I + w (n·σ) form with real unit n and complex w.
    let (c0, c) = u.pauli_coefficients();
    let re = [c[0].re, c[1].re, c[2].re];
    let im = [c[0].im, c[1].im, c[2].im];
    let (nre, nim) = (norm3(&re), norm3(&im));
    let dir = if nre >= nim { re } else { im };
    let dn = nre.max(nim);
    let w_mag = (c[0].norm_sqr() + c[1].norm_sqr() + c[2].norm_sqr()).sqrt();

    let plus_minus = |w: C64| (wrap_phase((c0 + w).arg()), wrap_phase((c0 - w).arg()));

    if 2.0 * w_mag < GAP_TOL || dn == 0.0 {
        let (t1, t2) = plus_minus(ZERO);
        return Ok(UnitaryEigen { theta1: t1, theta2: t2, bloch: None });
    }
    let n = [dir[0] / dn, dir[1] / dn, dir[2] / dn];
    let w = c[0] * n[0] + c[1] * n[1] + c[2] * n[2];
    let (tp, tm) = plus_minus(w);
    let bloch = BlochVector::from_unit_unchecked(n);
    if tp >= tm {
        Ok(UnitaryEigen { theta1: tp, theta2: tm, bloch: Some(bloch) })
    } else {
        Ok(UnitaryEigen { theta1: tm, theta2: tp, bloch: Some(-bloch) })
    }
}
