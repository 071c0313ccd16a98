//! Product rules on the unit sphere `S^{2n-1}` of C^n.
//!
//! A point is written `omega_j = r_j e^{i theta_j}` with `r` on the positive orthant of
//! `S^{n-1}` in hyperspherical angles `phi_1..phi_{n-1}` in `[0, pi/2]`. The surface measure
//! is `prod r_j * prod_k sin(phi_k)^{n-1-k} dphi dtheta`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gauss::gauss_legendre_on;
use crate::geometry::CPoint;

/// Nodes `omega` and weights summing to the area of `S^{2n-1}`.
#[derive(Clone, Debug)]
pub struct SphereRule {
    pub n: usize,
    pub resolution: usize,
    pub nodes: Vec<(CPoint, f64)>,
}

impl SphereRule {
    /// `resolution` trapezoid points per `theta_j` (offset by half a step so no node lies on a
    /// coordinate hyperplane) and `resolution / 2` Gauss–Legendre points per `phi_k`.
    pub fn new(n: usize, resolution: usize) -> Self {
        let nt = resolution.max(2);
        let np = (resolution / 2).max(1);
        let thetas: Vec<(f64, f64)> =
            (0..nt).map(|k| ((k as f64 + 0.5) * 2.0 * PI / nt as f64, 2.0 * PI / nt as f64)).collect();
        let phis = gauss_legendre_on(np, 0.0, PI / 2.0);

        // radial profiles r in the positive orthant of S^{n-1}
        let mut profiles: Vec<(Vec<f64>, f64)> = Vec::new();
        if n == 1 {
            profiles.push((vec![1.0], 1.0));
        } else {
            let mut idx = vec![0usize; n - 1];
            loop {
                let mut r = Vec::with_capacity(n);
                let mut w = 1.0;
                let mut sin_prod = 1.0;
                for (k, &i) in idx.iter().enumerate() {
                    let (phi, wp) = phis[i];
                    r.push(sin_prod * phi.cos());
                    w *= wp * phi.sin().powi((n - 2 - k) as i32);
                    sin_prod *= phi.sin();
                }
                r.push(sin_prod);
                w *= r.iter().product::<f64>();
                profiles.push((r, w));
                // odometer
                let mut k = 0;
                while k < n - 1 {
                    idx[k] += 1;
                    if idx[k] < np {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == n - 1 {
                    break;
                }
            }
        }

        let mut nodes = Vec::with_capacity(profiles.len() * nt.pow(n as u32));
        for (r, wr) in &profiles {
            let mut idx = vec![0usize; n];
            loop {
                let mut p = CPoint::zeros(n);
                let mut w = *wr;
                for j in 0..n {
                    let (t, wt) = thetas[idx[j]];
                    p = p + CPoint::real_axis(n, 2 * j) * Complex64::from_polar(r[j], t);
                    w *= wt;
                }
                nodes.push((p, w));
                let mut k = 0;
                while k < n {
                    idx[k] += 1;
                    if idx[k] < nt {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        }
        SphereRule { n, resolution, nodes }
    }

    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|(_, w)| w).sum()
    }
}

/// Area of the unit sphere `S^{d-1}` in R^d.
pub fn sphere_area(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI / (d as f64 - 2.0) * sphere_area(d - 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_area() {
        assert!((SphereRule::new(1, 16).total_weight() - 2.0 * PI).abs() < 1e-13);
        let s3 = SphereRule::new(2, 32).total_weight();
        assert!((s3 / (2.0 * PI * PI) - 1.0).abs() < 1e-3, "{s3}");
        let s5 = SphereRule::new(3, 8).total_weight();
        assert!((s5 / sphere_area(6) - 1.0).abs() < 1e-3, "{s5}");
    }

    #[test]
    fn nodes_are_unit_and_off_hyperplanes() {
        for (p, _) in SphereRule::new(2, 12).nodes {
            assert!((p.norm() - 1.0).abs() < 1e-14);
            assert!((0..4).all(|m| p.real(m).abs() > 1e-6));
        }
    }

    #[test]
    fn integrates_low_moments() {
        // int |omega_1|^2 over S^3 = 2 pi^2 / 2
        let rule = SphereRule::new(2, 16);
        let v: f64 = rule.nodes.iter().map(|(p, w)| w * p[0].norm_sqr()).sum();
        assert!((v - PI * PI).abs() < 1e-10);
    }
}
