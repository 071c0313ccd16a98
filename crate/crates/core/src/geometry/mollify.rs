//! Smooth approximants `r^(k)` by Gaussian convolution with width `1/k`.

use std::f64::consts::PI;
use std::sync::Arc;

use super::defining::{mixed_from_real_hessian, DefiningFunction, PowerFunction, Smoothness};
use super::point::{CMatrix, CPoint};
use crate::quadrature::gauss::{gauss_hermite, gauss_legendre};

/// Returns the Gaussian mollification of `r` with width `1/k`. Defining functions with a
/// separable structure supply a specialised (1-d) version; others use a tensor Gauss–Hermite grid.
pub fn mollify(r: &Arc<dyn DefiningFunction>, k: u32) -> Arc<dyn DefiningFunction> {
    assert!(k > 0);
    r.mollified(k).unwrap_or_else(|| Arc::new(GaussianMollifier::new(r.clone(), 1.0 / k as f64, 6)))
}

/// Tensor Gauss–Hermite convolution in all 2n real variables.
#[derive(Debug)]
pub struct GaussianMollifier {
    base: Arc<dyn DefiningFunction>,
    sigma: f64,
    nodes: Vec<(Vec<f64>, f64)>,
}

impl GaussianMollifier {
    pub fn new(base: Arc<dyn DefiningFunction>, sigma: f64, per_dim: usize) -> Self {
        let d = 2 * base.dim();
        let (x, w) = gauss_hermite(per_dim);
        let norm = PI.powf(-0.5 * d as f64);
        let mut nodes = Vec::with_capacity(per_dim.pow(d as u32));
        let mut idx = vec![0usize; d];
        loop {
            let u: Vec<f64> = idx.iter().map(|&i| x[i]).collect();
            let wt: f64 = idx.iter().map(|&i| w[i]).product::<f64>() * norm;
            nodes.push((u, wt));
            let mut k = 0;
            while k < d {
                idx[k] += 1;
                if idx[k] < per_dim {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == d {
                break;
            }
        }
        GaussianMollifier { base, sigma, nodes }
    }

    fn shift(&self, z: &CPoint, u: &[f64]) -> CPoint {
        // y = sigma * sqrt(2) * u
        let s = self.sigma * std::f64::consts::SQRT_2;
        let y: Vec<f64> = u.iter().map(|a| a * s).collect();
        *z - CPoint::from_reals(&y)
    }
}

impl DefiningFunction for GaussianMollifier {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn value(&self, z: &CPoint) -> f64 {
        self.nodes.iter().map(|(u, w)| w * self.base.value(&self.shift(z, u))).sum()
    }

    fn grad(&self, z: &CPoint) -> CPoint {
        let mut g = CPoint::zeros(self.dim());
        for (u, w) in &self.nodes {
            g = g + self.base.grad(&self.shift(z, u)).scale(*w);
        }
        g
    }

    /// The second derivative falls on the Gaussian: `H_mk = -int d_m r(z - y) y_k / sigma^2 G(y) dy`.
    fn mixed_hessian(&self, z: &CPoint) -> CMatrix {
        let n = self.dim();
        let d = 2 * n;
        let mut h = vec![vec![0.0; d]; d];
        let fac = -std::f64::consts::SQRT_2 / self.sigma;
        for (u, w) in &self.nodes {
            let g = self.base.real_gradient(&self.shift(z, u)).to_reals();
            for m in 0..d {
                for k in 0..d {
                    h[m][k] += w * g[m] * u[k] * fac;
                }
            }
        }
        for a in 0..d {
            for b in 0..a {
                let s = 0.5 * (h[a][b] + h[b][a]);
                h[a][b] = s;
                h[b][a] = s;
            }
        }
        mixed_from_real_hessian(n, &h)
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Smooth
    }
}

/// Exact-to-quadrature mollification of `sum_m a_m |x_m|^{p_m} - level`, one coordinate at a time.
#[derive(Debug, Clone)]
pub struct MollifiedPower {
    base: PowerFunction,
    sigma: f64,
    panel: (Vec<f64>, Vec<f64>),
}

impl MollifiedPower {
    pub fn new(base: PowerFunction, sigma: f64) -> Self {
        MollifiedPower { base, sigma, panel: gauss_legendre(10) }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `(F, F', F'')` for `F = |.|^p * G_sigma` at `x`. Derivatives act on the Gaussian and the
    /// kink of `|t|^p` at `t = 0` is resolved by panels graded geometrically towards it.
    pub fn convolve_abs_pow(&self, x: f64, p: f64) -> (f64, f64, f64) {
        let s = self.sigma;
        let (lo, hi) = (x - 10.0 * s, x + 10.0 * s);
        let mut edges: Vec<f64> = (0..=24).map(|k| lo + (hi - lo) * k as f64 / 24.0).collect();
        if lo < 0.0 && hi > 0.0 {
            // geometric grading of the panels next to the kink at 0
            let w = (hi - lo) / 24.0;
            edges.extend((1..40).flat_map(|k| {
                let e = w * 0.5f64.powi(k);
                [-e, e]
            }));
            edges.push(0.0);
            edges.retain(|e| (lo..=hi).contains(e));
            edges.sort_by(f64::total_cmp);
            edges.dedup();
        }
        let mut acc = (0.0, 0.0, 0.0);
        for pair in edges.windows(2) {
            let (h, c) = (0.5 * (pair[1] - pair[0]), 0.5 * (pair[1] + pair[0]));
            for (xi, wi) in self.panel.0.iter().zip(&self.panel.1) {
                let t = c + h * xi;
                let y = x - t;
                let g = (-0.5 * (y / s).powi(2)).exp() / (s * (2.0 * PI).sqrt());
                let f = t.abs().powf(p) * wi * h;
                acc.0 += f * g;
                acc.1 += f * g * (-y / (s * s));
                acc.2 += f * g * ((y * y) / (s * s) - 1.0) / (s * s);
            }
        }
        acc
    }

    fn per_coordinate(&self, z: &CPoint) -> Vec<(f64, f64, f64)> {
        (0..self.base.exponents.len())
            .map(|m| {
                let (v, d1, d2) = self.convolve_abs_pow(z.real(m), self.base.exponents[m]);
                let a = self.base.coeffs[m];
                (a * v, a * d1, a * d2)
            })
            .collect()
    }
}

impl DefiningFunction for MollifiedPower {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn value(&self, z: &CPoint) -> f64 {
        self.per_coordinate(z).iter().map(|t| t.0).sum::<f64>() - self.base.level
    }

    fn grad(&self, z: &CPoint) -> CPoint {
        let c = self.per_coordinate(z);
        let mut g = CPoint::zeros(self.dim());
        for j in 0..self.dim() {
            g[j] = num_complex::Complex64::new(c[2 * j].1, -c[2 * j + 1].1) * 0.5;
        }
        g
    }

    fn mixed_hessian(&self, z: &CPoint) -> CMatrix {
        let c = self.per_coordinate(z);
        let mut h = CMatrix::zeros(self.dim());
        for j in 0..self.dim() {
            h.set(j, j, num_complex::Complex64::new(0.25 * (c[2 * j].2 + c[2 * j + 1].2), 0.0));
        }
        h
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Smooth
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::defining::Quadric;

    #[test]
    fn mollified_quadric_shifts_by_variance() {
        // |z|^2 - 1 convolved with an isotropic Gaussian: + 2n sigma^2
        let r: Arc<dyn DefiningFunction> = Arc::new(Quadric::ball(CPoint::zeros(1), 1.0));
        let m = mollify(&r, 10);
        let z = CPoint::from_reals(&[0.3, -0.4]);
        assert!((m.value(&z) - (r.value(&z) + 2.0 * 0.01)).abs() < 1e-12);
        assert!((m.grad(&z) - r.grad(&z)).norm() < 1e-12);
        assert!((m.mixed_hessian(&z).get(0, 0).re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn one_dimensional_convolution_matches_closed_form_for_square() {
        let p = MollifiedPower::new(PowerFunction::new(vec![2.0, 2.0], 1.0), 0.1);
        let (v, d1, d2) = p.convolve_abs_pow(0.37, 2.0);
        assert!((v - (0.37f64.powi(2) + 0.01)).abs() < 1e-12);
        assert!((d1 - 0.74).abs() < 1e-11);
        assert!((d2 - 2.0).abs() < 1e-9);
    }
}
