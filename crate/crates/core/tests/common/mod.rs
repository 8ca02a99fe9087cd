//! Reference implementations used as oracles. Nothing here goes through the
//! closed-form routines of the library.

#![allow(dead_code)]

use num_complex::Complex64 as C64;

pub type M2 = [[C64; 2]; 2];

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn sigma_x() -> M2 {
    [[c(0.0), c(1.0)], [c(1.0), c(0.0)]]
}

pub fn sigma_y() -> M2 {
    [[c(0.0), -I], [I, c(0.0)]]
}

pub fn sigma_z() -> M2 {
    [[c(1.0), c(0.0)], [c(0.0), c(-1.0)]]
}

pub fn eye() -> M2 {
    [[c(1.0), c(0.0)], [c(0.0), c(1.0)]]
}

pub fn add(a: &M2, b: &M2) -> M2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] + b[i][j]))
}

pub fn scale(a: &M2, s: C64) -> M2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] * s))
}

pub fn mul(a: &M2, b: &M2) -> M2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j]))
}

pub fn apply(a: &M2, v: [C64; 2]) -> [C64; 2] {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

pub fn max_diff(a: &M2, b: &M2) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

/// `exp(A)` by a 60-term Taylor series with scaling and squaring.
pub fn taylor_exp(a: &M2) -> M2 {
    let norm: f64 = a.iter().flatten().map(|z| z.norm()).sum();
    let squarings = norm.max(1.0).log2().ceil() as u32 + 1;
    let scaled = scale(a, c(0.5f64.powi(squarings as i32)));
    let mut term = eye();
    let mut sum = eye();
    for k in 1..60 {
        term = scale(&mul(&term, &scaled), c(1.0 / k as f64));
        sum = add(&sum, &term);
    }
    for _ in 0..squarings {
        sum = mul(&sum, &sum);
    }
    sum
}

/// `H(λ) = ¼[(1 + cos λ) σ_y + sin λ σ_z] + ½ ε σ_x`, assembled entrywise.
pub fn perturbed_matrix(lambda: f64, eps: f64) -> M2 {
    let y = 0.25 * (1.0 + lambda.cos());
    let z = 0.25 * lambda.sin();
    let x = 0.5 * eps;
    [[c(z), C64::new(x, -y)], [C64::new(x, y), c(-z)]]
}

/// Upper eigenvector of `perturbed_matrix`, from the 2×2 eigenvalue equation.
pub fn perturbed_upper_state(lambda: f64, eps: f64) -> [C64; 2] {
    let h = perturbed_matrix(lambda, eps);
    let (a, b, d) = (h[0][0].re, h[0][1], h[1][1].re);
    let e = 0.5 * (a + d) + (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    // (a - e) u + b v = 0; choose whichever row is better conditioned.
    let v = if (a - e).abs() > (d - e).abs() { [-b, c(a - e)] } else { [c(d - e), -b.conj()] };
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

pub fn overlap_sq(u: [C64; 2], v: [C64; 2]) -> f64 {
    (u[0].conj() * v[0] + u[1].conj() * v[1]).norm_sqr()
}

/// Classical RK4 for `i dψ/dt = H(t) ψ`, renormalizing nothing.
pub fn rk4<F: Fn(f64) -> M2>(h: F, psi0: [C64; 2], total: f64, steps: usize) -> [C64; 2] {
    let dt = total / steps as f64;
    let f = |t: f64, y: [C64; 2]| -> [C64; 2] {
        let hy = apply(&h(t), y);
        [-I * hy[0], -I * hy[1]]
    };
    let axpy = |y: [C64; 2], k: [C64; 2], s: f64| [y[0] + k[0] * s, y[1] + k[1] * s];
    let mut y = psi0;
    for n in 0..steps {
        let t = n as f64 * dt;
        let k1 = f(t, y);
        let k2 = f(t + 0.5 * dt, axpy(y, k1, 0.5 * dt));
        let k3 = f(t + 0.5 * dt, axpy(y, k2, 0.5 * dt));
        let k4 = f(t + dt, axpy(y, k3, dt));
        y = [
            y[0] + (k1[0] + k2[0] * 2.0 + k3[0] * 2.0 + k4[0]) * (dt / 6.0),
            y[1] + (k1[1] + k2[1] * 2.0 + k3[1] * 2.0 + k4[1]) * (dt / 6.0),
        ];
    }
    y
}

/// State whose Bloch vector is `(x, y, z)` (unit).
pub fn state_from_bloch(v: [f64; 3]) -> [C64; 2] {
    let theta = v[2].clamp(-1.0, 1.0).acos();
    let phi = v[1].atan2(v[0]);
    [c((theta / 2.0).cos()), C64::from_polar((theta / 2.0).sin(), phi)]
}
