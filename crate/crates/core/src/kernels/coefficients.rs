//! Closed-form coefficients of the kernels `Omega^0`, `Omega^1` and `Omega^{01}`.
//!
//! A kernel of z-degree `q` is stored as coefficients `c[L, J]` of the monomials
//! `dzetabar_L ^ dzbar_J ^ dzeta_1 ^ ... ^ dzeta_n`, `|J| = q`. Writing `A` for the `n x 2n`
//! matrix of `dbar g` (zetabar columns first), `w = zeta - z` and `M = L + (n + J)`,
//!
//! ```text
//! Omega^i:   c = (2 pi i)^-n (-1)^{n(n-1)/2} (n-1)! det[g | A_M] / (g.w)^n
//! Omega^01:  c = (2 pi i)^-n (-1)^{(n-2)(n-3)/2}
//!                sum_{a+b=n-2} a! b! [t^b] det[g0 | g1 | (A0 + t A1)_M] / ((g0.w)^{a+1} (g1.w)^{b+1})
//! ```

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::det::{det, det_linear_pencil, Mat, ZERO};
use super::weights::{CFWeight, DbarMatrix};
use crate::error::{Error, Result};
use crate::forms::multi_index::{combos, rank, MultiIndex};
use crate::geometry::{CPoint, DefiningFunction, MAX_DIM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KernelKind {
    Omega0,
    Omega1,
    Omega01,
}

impl KernelKind {
    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Omega0 => "Omega0",
            KernelKind::Omega1 => "Omega1",
            KernelKind::Omega01 => "Omega01",
        }
    }

    /// Total dbar-degree (number of `dzetabar`/`dzbar` factors).
    pub fn bar_degree(self, n: usize) -> Option<usize> {
        match self {
            KernelKind::Omega0 | KernelKind::Omega1 => Some(n - 1),
            KernelKind::Omega01 => n.checked_sub(2),
        }
    }
}

/// Lower bounds on the kernel denominators; below them evaluation errors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Guard {
    /// Bound on `g0.w = |zeta - z|^2`.
    pub g0: f64,
    /// Bound on `|g1.w| = |r_zeta.(zeta - z)|`.
    pub g1: f64,
}

impl Guard {
    /// `1e-8 * scale^2` for both denominators.
    pub fn for_scale(scale: f64) -> Self {
        Guard { g0: 1e-8 * scale * scale, g1: 1e-8 * scale * scale }
    }

    pub fn none() -> Self {
        Guard { g0: 0.0, g1: 0.0 }
    }
}

impl Default for Guard {
    fn default() -> Self {
        Guard::for_scale(1.0)
    }
}

/// Coefficients `c[L, J]` of one z-degree component at a fixed `(z, zeta)`.
#[derive(Clone, Debug)]
pub struct KernelCoefficients {
    pub kind: KernelKind,
    pub n: usize,
    pub q: usize,
    l_len: usize,
    values: Vec<Complex64>,
}

impl KernelCoefficients {
    fn zeros(kind: KernelKind, n: usize, q: usize, l_len: usize) -> Self {
        let len = combos(n, q).len() * combos(n, l_len).len();
        KernelCoefficients { kind, n, q, l_len, values: vec![ZERO; len] }
    }

    /// Number of `dzetabar` factors in each monomial.
    pub fn zeta_bar_degree(&self) -> usize {
        self.l_len
    }

    fn slot(&self, l: MultiIndex, j: MultiIndex) -> usize {
        rank(self.n, j) * combos(self.n, self.l_len).len() + rank(self.n, l)
    }

    pub fn get(&self, l: MultiIndex, j: MultiIndex) -> Complex64 {
        self.values[self.slot(l, j)]
    }

    /// `(L, J, c)` for every monomial.
    pub fn entries(&self) -> Vec<(MultiIndex, MultiIndex, Complex64)> {
        let ls = combos(self.n, self.l_len);
        let mut out = Vec::with_capacity(self.values.len());
        for (a, j) in combos(self.n, self.q).into_iter().enumerate() {
            for (b, l) in ls.iter().enumerate() {
                out.push((*l, j, self.values[a * ls.len() + b]));
            }
        }
        out
    }

    /// Raw values, `J`-major then `L` (both in [`combos`] order).
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn norm_const(n: usize) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI).powi(-(n as i32))
}

fn sign_pow(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Columns of `A` selected by `M = L + (n + J)` (zetabar columns first).
fn columns(n: usize, l: MultiIndex, j: MultiIndex) -> Vec<usize> {
    let mut c = l.entries();
    c.extend(j.entries().iter().map(|k| n + k));
    c
}

fn check_degree(kind: KernelKind, n: usize, q: usize) -> Result<usize> {
    match kind.bar_degree(n) {
        Some(d) if q <= d => Ok(d - q),
        _ => Err(Error::Degree { kernel: kind.name(), q, n }),
    }
}

fn guarded(kernel: &'static str, value: Complex64, guard: f64) -> Result<Complex64> {
    if value.norm() < guard || !value.norm().is_finite() {
        Err(Error::Singular { kernel, value: value.norm(), guard })
    } else {
        Ok(value)
    }
}

/// Component of z-degree `q` of the single-weight kernel built from `g`.
pub fn single_weight_coeffs(
    kind: KernelKind,
    weight: &CFWeight,
    z: &CPoint,
    zeta: &CPoint,
    q: usize,
    guard: f64,
) -> Result<KernelCoefficients> {
    let n = z.dim();
    let l_len = check_degree(kind, n, q)?;
    let w = *zeta - *z;
    let g = weight.eval(z, zeta);
    let denom = guarded(kind.name(), g.pair(&w), guard)?;
    let mut out = KernelCoefficients::zeros(kind, n, q, l_len);
    if q > 0 && matches!(weight, CFWeight::G1(_)) {
        // holomorphic in z: no dzbar factors
        return Ok(out);
    }
    let a = weight.dbar_matrix(zeta);
    let pre = norm_const(n) * sign_pow(n * (n - 1) / 2) * factorial(n - 1) / denom.powi(n as i32);
    let ls = combos(n, l_len);
    for (ja, j) in combos(n, q).into_iter().enumerate() {
        for (lb, l) in ls.iter().enumerate() {
            let cols = columns(n, *l, j);
            let mut m: Mat = [[ZERO; MAX_DIM]; MAX_DIM];
            for i in 0..n {
                m[i][0] = g[i];
                for (c, &k) in cols.iter().enumerate() {
                    m[i][c + 1] = a[i][k];
                }
            }
            out.values[ja * ls.len() + lb] = pre * det(n, &m);
        }
    }
    Ok(out)
}

/// Component of z-degree `q` of the transition kernel between `g0` and `g1 = r_zeta`.
pub fn transition_coeffs(
    r: &Arc<dyn DefiningFunction>,
    z: &CPoint,
    zeta: &CPoint,
    q: usize,
    guard: &Guard,
) -> Result<KernelCoefficients> {
    let n = z.dim();
    let kind = KernelKind::Omega01;
    let l_len = check_degree(kind, n, q)?;
    let w = *zeta - *z;
    let (w0, w1) = (CFWeight::G0, CFWeight::G1(r.clone()));
    let (g0, g1) = (w0.eval(z, zeta), w1.eval(z, zeta));
    let d0 = guarded("Omega01/g0", g0.pair(&w), guard.g0)?;
    let d1 = guarded("Omega01/g1", g1.pair(&w), guard.g1)?;
    let (a0, a1): (DbarMatrix, DbarMatrix) = (w0.dbar_matrix(zeta), w1.dbar_matrix(zeta));
    let pre = norm_const(n) * sign_pow((n - 2) * (n.saturating_sub(3)) / 2);
    let top = n - 2;
    // weights a! b! / (d0^{a+1} d1^{b+1}) for b = 0..=n-2
    let wts: Vec<Complex64> = (0..=top)
        .map(|b| {
            let a = top - b;
            factorial(a) * factorial(b) / (d0.powi(a as i32 + 1) * d1.powi(b as i32 + 1))
        })
        .collect();
    let mut out = KernelCoefficients::zeros(kind, n, q, l_len);
    let ls = combos(n, l_len);
    for (ja, j) in combos(n, q).into_iter().enumerate() {
        for (lb, l) in ls.iter().enumerate() {
            let cols = columns(n, *l, j);
            let mut ma: Mat = [[ZERO; MAX_DIM]; MAX_DIM];
            let mut mb: Mat = [[ZERO; MAX_DIM]; MAX_DIM];
            for i in 0..n {
                ma[i][0] = g0[i];
                ma[i][1] = g1[i];
                for (c, &k) in cols.iter().enumerate() {
                    ma[i][c + 2] = a0[i][k];
                    mb[i][c + 2] = a1[i][k];
                }
            }
            let poly = det_linear_pencil(n, &ma, &mb);
            let s: Complex64 = (0..=top).map(|b| poly[b] * wts[b]).sum();
            out.values[ja * ls.len() + lb] = pre * s;
        }
    }
    Ok(out)
}

/// `Omega^0_{0,q}` (Bochner–Martinelli).
pub fn omega0_coeffs(z: &CPoint, zeta: &CPoint, q: usize, guard: &Guard) -> Result<KernelCoefficients> {
    single_weight_coeffs(KernelKind::Omega0, &CFWeight::G0, z, zeta, q, guard.g0)
}

/// `Omega^1_{0,q}` (Leray); zero for `q >= 1`.
pub fn omega1_coeffs(
    r: &Arc<dyn DefiningFunction>,
    z: &CPoint,
    zeta: &CPoint,
    q: usize,
    guard: &Guard,
) -> Result<KernelCoefficients> {
    single_weight_coeffs(KernelKind::Omega1, &CFWeight::G1(r.clone()), z, zeta, q, guard.g1)
}

/// `Omega^{01}_{0,q}`, `0 <= q <= n - 2`.
pub fn omega01_coeffs(
    r: &Arc<dyn DefiningFunction>,
    z: &CPoint,
    zeta: &CPoint,
    q: usize,
    guard: &Guard,
) -> Result<KernelCoefficients> {
    transition_coeffs(r, z, zeta, q, guard)
}

/// A kernel family ready to be evaluated at many `(z, zeta)` pairs.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub kind: KernelKind,
    r: Option<Arc<dyn DefiningFunction>>,
    pub guard: Guard,
}

impl Kernel {
    pub fn omega0(guard: Guard) -> Self {
        Kernel { kind: KernelKind::Omega0, r: None, guard }
    }

    pub fn omega1(r: Arc<dyn DefiningFunction>, guard: Guard) -> Self {
        Kernel { kind: KernelKind::Omega1, r: Some(r), guard }
    }

    pub fn omega01(r: Arc<dyn DefiningFunction>, guard: Guard) -> Self {
        Kernel { kind: KernelKind::Omega01, r: Some(r), guard }
    }

    pub fn new(kind: KernelKind, r: Arc<dyn DefiningFunction>, guard: Guard) -> Self {
        match kind {
            KernelKind::Omega0 => Kernel::omega0(guard),
            KernelKind::Omega1 => Kernel::omega1(r, guard),
            KernelKind::Omega01 => Kernel::omega01(r, guard),
        }
    }

    pub fn defining_function(&self) -> Option<&Arc<dyn DefiningFunction>> {
        self.r.as_ref()
    }

    pub fn coeffs(&self, z: &CPoint, zeta: &CPoint, q: usize) -> Result<KernelCoefficients> {
        match self.kind {
            KernelKind::Omega0 => omega0_coeffs(z, zeta, q, &self.guard),
            KernelKind::Omega1 => omega1_coeffs(self.r.as_ref().expect("Omega1 needs r"), z, zeta, q, &self.guard),
            KernelKind::Omega01 => omega01_coeffs(self.r.as_ref().expect("Omega01 needs r"), z, zeta, q, &self.guard),
        }
    }

    /// All z-degree components, keyed by the 2n-bit mask `L | (J << n)`.
    pub fn total(&self, z: &CPoint, zeta: &CPoint) -> Result<Vec<Complex64>> {
        let n = z.dim();
        let mut out = vec![ZERO; 1 << (2 * n)];
        let Some(deg) = self.kind.bar_degree(n) else {
            return Ok(out);
        };
        for q in 0..=deg {
            for (l, j, c) in self.coeffs(z, zeta, q)?.entries() {
                out[(l.bits() | (j.bits() << n)) as usize] = c;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Quadric;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    fn ball(n: usize) -> Arc<dyn DefiningFunction> {
        Arc::new(Quadric::ball(CPoint::zeros(n), 1.0))
    }

    #[test]
    fn n1_is_cauchy() {
        let z = CPoint::new(&[c(0.2, 0.1)]);
        let zeta = CPoint::new(&[c(0.9, -0.6)]);
        let cauchy = 1.0 / (c(0.0, 2.0 * PI) * (zeta[0] - z[0]));
        let k0 = omega0_coeffs(&z, &zeta, 0, &Guard::default()).unwrap();
        let k1 = omega1_coeffs(&ball(1), &z, &zeta, 0, &Guard::default()).unwrap();
        assert!((k0.values()[0] - cauchy).norm() < 1e-15);
        assert!((k1.values()[0] - cauchy).norm() < 1e-15);
    }

    #[test]
    fn degree_errors_and_holomorphy() {
        let z = CPoint::new(&[c(0.1, 0.0), c(0.0, 0.2)]);
        let zeta = CPoint::new(&[c(0.8, 0.3), c(0.1, -0.5)]);
        assert!(matches!(omega01_coeffs(&ball(2), &z, &zeta, 1, &Guard::default()), Err(Error::Degree { .. })));
        let k1 = omega1_coeffs(&ball(2), &z, &zeta, 1, &Guard::default()).unwrap();
        assert_eq!(k1.max_abs(), 0.0);
    }

    #[test]
    fn ball_at_origin() {
        // g1 = g0 at z = 0 for the unit ball: Omega1 = Omega0, Omega01 = 0
        let z = CPoint::zeros(2);
        let zeta = CPoint::new(&[c(0.8, 0.3), c(0.1, -0.5)]);
        let g = Guard::default();
        let k0 = omega0_coeffs(&z, &zeta, 0, &g).unwrap();
        let k1 = omega1_coeffs(&ball(2), &z, &zeta, 0, &g).unwrap();
        for (a, b) in k0.values().iter().zip(k1.values()) {
            assert!((a - b).norm() < 1e-14);
        }
        assert!(omega01_coeffs(&ball(2), &z, &zeta, 0, &g).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn guard_trips() {
        let z = CPoint::new(&[c(0.5, 0.0)]);
        let r = omega0_coeffs(&z, &z, 0, &Guard::default());
        assert!(matches!(r, Err(Error::Singular { .. })));
    }
}
