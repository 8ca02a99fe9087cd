//! Smooth, closed deformations of director paths.
//!
//! A deformation rotates each sample by a small rotation vector `ω(t)`, where
//! `t ∈ [0, 1]` is the normalized path parameter and `ω` is a finite Fourier
//! series, so `ω(0) = ω(1)` and closed paths stay closed.

use std::f64::consts::PI;

use rand::Rng;

use crate::bloch::BlochVector;
use crate::error::{HolonomyError, Result};
use crate::lift::DirectorPath;

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothRotationField {
    /// `(cos, sin)` coefficients for modes `k = 1..=K`.
    modes: Vec<([f64; 3], [f64; 3])>,
    offset: [f64; 3],
}

impl SmoothRotationField {
    /// Random field whose rotation angle never exceeds `amplitude` on `[0, 1]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, amplitude: f64, n_modes: usize) -> Result<Self> {
        if !amplitude.is_finite() || amplitude < 0.0 {
            return Err(HolonomyError::InvalidArgument(format!("bad amplitude {amplitude}")));
        }
        let mut draw = || -> [f64; 3] { std::array::from_fn(|_| rng.gen_range(-1.0..1.0)) };
        let offset = draw();
        let modes: Vec<_> = (0..n_modes).map(|_| (draw(), draw())).collect();
        let mut field = SmoothRotationField { modes, offset };
        // |ω| is bounded by the sum of coefficient norms; scale so the bound is the amplitude.
        let bound = norm(&field.offset) + field.modes.iter().map(|(c, s)| norm(c) + norm(s)).sum::<f64>();
        let scale = if bound > 0.0 { amplitude / bound } else { 0.0 };
        field.offset = field.offset.map(|x| x * scale);
        for (c, s) in &mut field.modes {
            *c = c.map(|x| x * scale);
            *s = s.map(|x| x * scale);
        }
        Ok(field)
    }

    pub fn zero() -> Self {
        SmoothRotationField { modes: Vec::new(), offset: [0.0; 3] }
    }

    /// Rotation vector at normalized parameter `t`.
    pub fn at(&self, t: f64) -> [f64; 3] {
        let mut w = self.offset;
        for (k, (c, s)) in self.modes.iter().enumerate() {
            let phase = 2.0 * PI * (k + 1) as f64 * t;
            let (sn, cs) = phase.sin_cos();
            for i in 0..3 {
                w[i] += c[i] * cs + s[i] * sn;
            }
        }
        w
    }

    pub fn max_angle(&self, samples: usize) -> f64 {
        (0..=samples).map(|i| norm(&self.at(i as f64 / samples as f64))).fold(0.0, f64::max)
    }
}

fn norm(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Rodrigues rotation of `v` by the rotation vector `w`.
pub fn rotate(v: &BlochVector, w: &[f64; 3]) -> BlochVector {
    let angle = norm(w);
    if angle == 0.0 {
        return *v;
    }
    let k = w.map(|x| x / angle);
    let a = v.components();
    let kxv = [k[1] * a[2] - k[2] * a[1], k[2] * a[0] - k[0] * a[2], k[0] * a[1] - k[1] * a[0]];
    let kv = k[0] * a[0] + k[1] * a[1] + k[2] * a[2];
    let (s, c) = angle.sin_cos();
    let r: [f64; 3] = std::array::from_fn(|i| a[i] * c + kxv[i] * s + k[i] * kv * (1.0 - c));
    BlochVector::from_array(r).expect("rotation preserves norm")
}

/// Applies the field to every sample; parameters are unchanged.
pub fn deform_path(path: &DirectorPath, field: &SmoothRotationField) -> Result<DirectorPath> {
    let params = path.params();
    let (p0, p1) = (params[0], params[params.len() - 1]);
    let span = p1 - p0;
    let points: Vec<BlochVector> = path
        .samples()
        .iter()
        .zip(params)
        .map(|(n, &p)| {
            let t = if span != 0.0 { (p - p0) / span } else { 0.0 };
            rotate(&n.representative(), &field.at(t))
        })
        .collect();
    DirectorPath::from_bloch(&points, params.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn field_is_periodic_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = SmoothRotationField::random(&mut rng, 0.05, 4).unwrap();
        let (a, b) = (f.at(0.0), f.at(1.0));
        assert!((0..3).all(|i| (a[i] - b[i]).abs() < 1e-15));
        assert!(f.max_angle(2000) <= 0.05 + 1e-15);
    }

    #[test]
    fn rotation_moves_by_at_most_the_angle() {
        let v = BlochVector::new(0.3, 0.4, 0.5).unwrap();
        let w = [0.01, -0.02, 0.03];
        let r = rotate(&v, &w);
        assert!(v.dot(&r).clamp(-1.0, 1.0).acos() <= norm(&w) + 1e-15);
        let about_v = rotate(&v, &v.components().map(|x| x * 0.2));
        assert!(about_v.distance(&v) < 1e-15);
    }

    #[test]
    fn zero_field_is_identity() {
        let path = crate::models::ParametricModel::crossing().director_path(0.0, 2.0 * PI, 41).unwrap();
        assert_eq!(deform_path(&path, &SmoothRotationField::zero()).unwrap(), path);
    }
}
