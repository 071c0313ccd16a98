//! Defining functions `r` with `D = {r < 0}`.
//!
//! Derivatives use the Wirtinger convention: `grad` returns `r_z = (dr/dz_1, ..., dr/dz_n)` and
//! `mixed_hessian` returns the matrix `[j][k] = d^2 r / dz_j dzbar_k`. Since `r` is real,
//! `dr/dzbar_k = conj(dr/dz_k)`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::point::{CMatrix, CPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Smoothness {
    Smooth,
    /// Second derivatives exist only almost everywhere.
    C11,
}

pub trait DefiningFunction: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;
    fn value(&self, z: &CPoint) -> f64;
    fn grad(&self, z: &CPoint) -> CPoint;
    fn mixed_hessian(&self, z: &CPoint) -> CMatrix;
    fn smoothness(&self) -> Smoothness;

    /// Specialised smooth approximant with Gaussian width `1/k`, when one is cheaper than the
    /// generic tensor-grid convolution.
    fn mollified(&self, _k: u32) -> Option<Arc<dyn DefiningFunction>> {
        None
    }

    /// Real gradient `(dr/dx_1, dr/dy_1, ...)` as a point of C^n (`dr/dx_j + i dr/dy_j`).
    fn real_gradient(&self, z: &CPoint) -> CPoint {
        // dr/dx = 2 Re r_z, dr/dy = -2 Im r_z
        self.grad(z).conj().scale(2.0)
    }
}

/// Converts a real symmetric Hessian (2n x 2n, `x_1, y_1, ...` order) to the mixed complex
/// Hessian `d^2/dz_j dzbar_k`.
pub fn mixed_from_real_hessian(n: usize, h: &[Vec<f64>]) -> CMatrix {
    let mut out = CMatrix::zeros(n);
    for j in 0..n {
        for k in 0..n {
            let (xj, yj, xk, yk) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
            let re = h[xj][xk] + h[yj][yk];
            let im = h[xj][yk] - h[yj][xk];
            out.set(j, k, Complex64::new(re, im) * 0.25);
        }
    }
    out
}

fn wirtinger_from_real(n: usize, g: &[f64]) -> CPoint {
    let mut out = CPoint::zeros(n);
    for j in 0..n {
        out[j] = Complex64::new(g[2 * j], -g[2 * j + 1]) * 0.5;
    }
    out
}

/// `sum_m w_m (x_m - c_m)^2 - level`; balls and axis-aligned ellipsoids.
#[derive(Clone, Debug)]
pub struct Quadric {
    center: CPoint,
    weights: Vec<f64>,
    level: f64,
}

impl Quadric {
    /// `|z - c|^2 - R^2`.
    pub fn ball(center: CPoint, radius: f64) -> Self {
        let n = center.dim();
        Quadric { center, weights: vec![1.0; 2 * n], level: radius * radius }
    }

    /// `sum_m ((x_m - c_m) / a_m)^2 - 1`.
    pub fn ellipsoid(center: CPoint, semi_axes: &[f64]) -> Self {
        assert_eq!(semi_axes.len(), 2 * center.dim());
        Quadric { center, weights: semi_axes.iter().map(|a| 1.0 / (a * a)).collect(), level: 1.0 }
    }

    /// General form; a negative `level` gives a strictly positive function such as `|z|^2 + 1`.
    pub fn new(center: CPoint, weights: Vec<f64>, level: f64) -> Self {
        assert_eq!(weights.len(), 2 * center.dim());
        Quadric { center, weights, level }
    }
}

impl DefiningFunction for Quadric {
    fn dim(&self) -> usize {
        self.center.dim()
    }

    fn value(&self, z: &CPoint) -> f64 {
        let d = *z - self.center;
        (0..2 * self.dim()).map(|m| self.weights[m] * d.real(m).powi(2)).sum::<f64>() - self.level
    }

    fn grad(&self, z: &CPoint) -> CPoint {
        let d = *z - self.center;
        let mut g = CPoint::zeros(self.dim());
        for j in 0..self.dim() {
            g[j] = Complex64::new(self.weights[2 * j] * d[j].re, -self.weights[2 * j + 1] * d[j].im);
        }
        g
    }

    fn mixed_hessian(&self, _z: &CPoint) -> CMatrix {
        let n = self.dim();
        let mut h = CMatrix::zeros(n);
        for j in 0..n {
            h.set(j, j, Complex64::new(0.5 * (self.weights[2 * j] + self.weights[2 * j + 1]), 0.0));
        }
        h
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Smooth
    }
}

/// `c0 + l . x` (real affine), used as a positive rescaling factor.
#[derive(Clone, Debug)]
pub struct Affine {
    n: usize,
    constant: f64,
    linear: Vec<f64>,
}

impl Affine {
    pub fn new(constant: f64, linear: Vec<f64>) -> Self {
        assert!(linear.len() % 2 == 0);
        Affine { n: linear.len() / 2, constant, linear }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Affine::new(c, vec![0.0; 2 * n])
    }
}

impl DefiningFunction for Affine {
    fn dim(&self) -> usize {
        self.n
    }

    fn value(&self, z: &CPoint) -> f64 {
        self.constant + (0..2 * self.n).map(|m| self.linear[m] * z.real(m)).sum::<f64>()
    }

    fn grad(&self, _z: &CPoint) -> CPoint {
        wirtinger_from_real(self.n, &self.linear)
    }

    fn mixed_hessian(&self, _z: &CPoint) -> CMatrix {
        CMatrix::zeros(self.n)
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Smooth
    }
}

/// `sum_m a_m |x_m|^{p_m} - level` over the 2n real coordinates.
#[derive(Clone, Debug)]
pub struct PowerFunction {
    pub(crate) exponents: Vec<f64>,
    pub(crate) coeffs: Vec<f64>,
    pub(crate) level: f64,
}

impl PowerFunction {
    pub fn new(exponents: Vec<f64>, level: f64) -> Self {
        assert!(exponents.len() % 2 == 0);
        let coeffs = vec![1.0; exponents.len()];
        PowerFunction { exponents, coeffs, level }
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }
}

pub(crate) fn abs_pow_derivs(x: f64, p: f64) -> (f64, f64, f64) {
    let a = x.abs();
    let v = a.powf(p);
    let d1 = p * a.powf(p - 1.0) * x.signum();
    let d2 = if a == 0.0 && p < 2.0 { f64::INFINITY } else { p * (p - 1.0) * a.powf(p - 2.0) };
    (v, if a == 0.0 { 0.0 } else { d1 }, d2)
}

impl DefiningFunction for PowerFunction {
    fn dim(&self) -> usize {
        self.exponents.len() / 2
    }

    fn value(&self, z: &CPoint) -> f64 {
        (0..self.exponents.len())
            .map(|m| self.coeffs[m] * z.real(m).abs().powf(self.exponents[m]))
            .sum::<f64>()
            - self.level
    }

    fn grad(&self, z: &CPoint) -> CPoint {
        let g: Vec<f64> = (0..self.exponents.len())
            .map(|m| self.coeffs[m] * abs_pow_derivs(z.real(m), self.exponents[m]).1)
            .collect();
        wirtinger_from_real(self.dim(), &g)
    }

    /// Diagonal; the a.e. value (infinite on a coordinate hyperplane when an exponent is < 2).
    fn mixed_hessian(&self, z: &CPoint) -> CMatrix {
        let n = self.dim();
        let mut h = CMatrix::zeros(n);
        for j in 0..n {
            let dxx = self.coeffs[2 * j] * abs_pow_derivs(z.real(2 * j), self.exponents[2 * j]).2;
            let dyy = self.coeffs[2 * j + 1] * abs_pow_derivs(z.real(2 * j + 1), self.exponents[2 * j + 1]).2;
            h.set(j, j, Complex64::new(0.25 * (dxx + dyy), 0.0));
        }
        h
    }

    fn smoothness(&self) -> Smoothness {
        // |x|^p is a polynomial only for even integer p
        if self.exponents.iter().all(|&p| p.fract() == 0.0 && p as i64 % 2 == 0) {
            Smoothness::Smooth
        } else {
            Smoothness::C11
        }
    }

    fn mollified(&self, k: u32) -> Option<Arc<dyn DefiningFunction>> {
        Some(Arc::new(super::mollify::MollifiedPower::new(self.clone(), 1.0 / k as f64)))
    }
}

/// Radius of a star-shaped domain as a function of the direction `w` on the unit sphere:
/// `rho(w) = base + tilt . w + w^T quad w`.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize, PartialEq)]
pub struct RadiusFunction {
    pub base: f64,
    pub tilt: Vec<f64>,
    #[serde(default)]
    pub quad: Vec<Vec<f64>>,
}

impl RadiusFunction {
    pub fn round(n: usize, radius: f64) -> Self {
        RadiusFunction { base: radius, tilt: vec![0.0; 2 * n], quad: Vec::new() }
    }

    /// The limaçon `1 + b cos(theta)` in the `z_1` plane, rotated through the other coordinates.
    pub fn limacon(n: usize, b: f64) -> Self {
        let mut tilt = vec![0.0; 2 * n];
        tilt[0] = b;
        RadiusFunction { base: 1.0, tilt, quad: Vec::new() }
    }

    fn quad_at(&self, i: usize, j: usize) -> f64 {
        self.quad.get(i).and_then(|row| row.get(j)).copied().unwrap_or(0.0)
    }

    /// Value and gradient in direction space (before projection onto the tangent space).
    fn eval(&self, w: &[f64]) -> (f64, Vec<f64>) {
        let d = w.len();
        let mut v = self.base;
        let mut g = self.tilt.clone();
        for i in 0..d {
            v += self.tilt[i] * w[i];
            for j in 0..d {
                let q = self.quad_at(i, j);
                if q != 0.0 {
                    v += q * w[i] * w[j];
                    g[i] += q * w[j];
                    g[j] += q * w[i];
                }
            }
        }
        (v, g)
    }

    pub fn value(&self, w: &[f64]) -> f64 {
        self.eval(w).0
    }
}

/// `|z - c|^2 / rho(w)^2 - 1` with `w = (z - c)/|z - c|`.
#[derive(Clone, Debug)]
pub struct StarShapedFunction {
    center: CPoint,
    radius: RadiusFunction,
}

impl StarShapedFunction {
    pub fn new(center: CPoint, radius: RadiusFunction) -> Self {
        assert_eq!(radius.tilt.len(), 2 * center.dim());
        StarShapedFunction { center, radius }
    }

    pub fn radius(&self) -> &RadiusFunction {
        &self.radius
    }

    fn real_grad(&self, z: &CPoint) -> Vec<f64> {
        let v = (*z - self.center).to_reals();
        let s = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if s == 0.0 {
            return vec![0.0; v.len()];
        }
        let w: Vec<f64> = v.iter().map(|a| a / s).collect();
        let (rho, g) = self.radius.eval(&w);
        let gw: f64 = g.iter().zip(&w).map(|(a, b)| a * b).sum();
        // grad_v rho = (I - w w^T) g / s
        (0..v.len())
            .map(|m| {
                let drho = (g[m] - gw * w[m]) / s;
                2.0 * v[m] / (rho * rho) - 2.0 * s * s / rho.powi(3) * drho
            })
            .collect()
    }
}

impl DefiningFunction for StarShapedFunction {
    fn dim(&self) -> usize {
        self.center.dim()
    }

    fn value(&self, z: &CPoint) -> f64 {
        let v = (*z - self.center).to_reals();
        let s2: f64 = v.iter().map(|a| a * a).sum();
        if s2 == 0.0 {
            return -1.0;
        }
        let s = s2.sqrt();
        let w: Vec<f64> = v.iter().map(|a| a / s).collect();
        let rho = self.radius.value(&w);
        s2 / (rho * rho) - 1.0
    }

    fn grad(&self, z: &CPoint) -> CPoint {
        wirtinger_from_real(self.dim(), &self.real_grad(z))
    }

    /// Central differences of the analytic gradient.
    fn mixed_hessian(&self, z: &CPoint) -> CMatrix {
        let n = self.dim();
        let h = 1e-5 * self.radius.base.abs().max(1e-3);
        let mut hess = vec![vec![0.0; 2 * n]; 2 * n];
        for k in 0..2 * n {
            let e = CPoint::real_axis(n, k).scale(h);
            let gp = self.real_grad(&(*z + e));
            let gm = self.real_grad(&(*z - e));
            for m in 0..2 * n {
                hess[m][k] = (gp[m] - gm[m]) / (2.0 * h);
            }
        }
        for a in 0..2 * n {
            for b in 0..a {
                let s = 0.5 * (hess[a][b] + hess[b][a]);
                hess[a][b] = s;
                hess[b][a] = s;
            }
        }
        mixed_from_real_hessian(n, &hess)
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Smooth
    }
}

/// `h * r` for a positive factor `h`; same zero set as `r`.
#[derive(Clone, Debug)]
pub struct Scaled {
    base: Arc<dyn DefiningFunction>,
    factor: Arc<dyn DefiningFunction>,
}

impl Scaled {
    pub fn new(base: Arc<dyn DefiningFunction>, factor: Arc<dyn DefiningFunction>) -> Self {
        assert_eq!(base.dim(), factor.dim());
        Scaled { base, factor }
    }
}

impl DefiningFunction for Scaled {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn value(&self, z: &CPoint) -> f64 {
        self.factor.value(z) * self.base.value(z)
    }

    fn grad(&self, z: &CPoint) -> CPoint {
        let (h, r) = (self.factor.value(z), self.base.value(z));
        self.base.grad(z).scale(h) + self.factor.grad(z).scale(r)
    }

    fn mixed_hessian(&self, z: &CPoint) -> CMatrix {
        let n = self.dim();
        let (h, r) = (self.factor.value(z), self.base.value(z));
        let (hg, rg) = (self.factor.grad(z), self.base.grad(z));
        let (hh, rh) = (self.factor.mixed_hessian(z), self.base.mixed_hessian(z));
        let mut out = CMatrix::zeros(n);
        for j in 0..n {
            for k in 0..n {
                let v = rh.get(j, k) * h + hg[j] * rg[k].conj() + rg[j] * hg[k].conj() + hh.get(j, k) * r;
                out.set(j, k, v);
            }
        }
        out
    }

    fn smoothness(&self) -> Smoothness {
        match (self.base.smoothness(), self.factor.smoothness()) {
            (Smoothness::Smooth, Smoothness::Smooth) => Smoothness::Smooth,
            _ => Smoothness::C11,
        }
    }
}

/// Central-difference Wirtinger gradient of `r.value`, used to validate analytic gradients.
pub fn fd_gradient(r: &dyn DefiningFunction, z: &CPoint, h: f64) -> CPoint {
    let n = r.dim();
    let g: Vec<f64> = (0..2 * n)
        .map(|m| {
            let e = CPoint::real_axis(n, m).scale(h);
            (r.value(&(*z + e)) - r.value(&(*z - e))) / (2.0 * h)
        })
        .collect();
    wirtinger_from_real(n, &g)
}
