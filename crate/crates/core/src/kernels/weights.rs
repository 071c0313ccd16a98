//! The Cauchy–Fantappiè weights `g0 = zetabar - zbar` and `g1 = r_zeta`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::geometry::{CMatrix, CPoint, DefiningFunction, MAX_DIM};

/// `dbar g` as an `n x 2n` matrix: column `k < n` is `d/dzetabar_k`, column `n + k` is `d/dzbar_k`.
pub type DbarMatrix = [[Complex64; 2 * MAX_DIM]; MAX_DIM];

#[derive(Clone, Debug)]
pub enum CFWeight {
    G0,
    G1(Arc<dyn DefiningFunction>),
}

impl CFWeight {
    pub fn label(&self) -> &'static str {
        match self {
            CFWeight::G0 => "g0",
            CFWeight::G1(_) => "g1",
        }
    }

    pub fn eval(&self, z: &CPoint, zeta: &CPoint) -> CPoint {
        match self {
            CFWeight::G0 => (*zeta - *z).conj(),
            CFWeight::G1(r) => r.grad(zeta),
        }
    }

    /// `dg_j / dzetabar_k`.
    pub fn dbar_zeta(&self, zeta: &CPoint) -> CMatrix {
        match self {
            CFWeight::G0 => CMatrix::identity(zeta.dim()),
            CFWeight::G1(r) => r.mixed_hessian(zeta),
        }
    }

    /// `dg_j / dzbar_k`.
    pub fn dbar_z(&self, n: usize) -> CMatrix {
        match self {
            CFWeight::G0 => CMatrix::scaled_identity(n, Complex64::new(-1.0, 0.0)),
            CFWeight::G1(_) => CMatrix::zeros(n),
        }
    }

    pub fn dbar_matrix(&self, zeta: &CPoint) -> DbarMatrix {
        let n = zeta.dim();
        let (a, b) = (self.dbar_zeta(zeta), self.dbar_z(n));
        let mut m = [[Complex64::new(0.0, 0.0); 2 * MAX_DIM]; MAX_DIM];
        for j in 0..n {
            for k in 0..n {
                m[j][k] = a.get(j, k);
                m[j][n + k] = b.get(j, k);
            }
        }
        m
    }
}
