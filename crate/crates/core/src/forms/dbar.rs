//! Finite-difference Wirtinger derivatives and dbar.

use std::sync::Arc;

use num_complex::Complex64;

use super::field::FormField;
use super::multi_index::{combos, wedge_sign};
use super::value::FormValue;
use crate::error::{Error, Result};
use crate::geometry::CPoint;

/// Central differences of `u` along the 2n real axes: entry `m` holds `du/dx_m`.
pub fn real_partials(u: &dyn FormField, z: &CPoint, h: f64) -> Result<Vec<FormValue>> {
    let n = u.n();
    (0..2 * n)
        .map(|m| {
            let e = CPoint::real_axis(n, m).scale(h);
            let (zp, zm) = (*z + e, *z - e);
            if !u.defined_at(&zp) || !u.defined_at(&zm) {
                return Err(Error::StepTooLarge { step: h, point: z.to_string() });
            }
            Ok(&(&u.eval(&zp) - &u.eval(&zm)) * (0.5 / h))
        })
        .collect()
}

/// Assembles `dbar u` from real partial derivatives of the coefficients of `u`.
pub fn dbar_from_partials(n: usize, q: usize, partials: &[FormValue]) -> FormValue {
    let mut out = FormValue::zeros(n, q + 1);
    if q >= n {
        return out;
    }
    let idx = combos(n, q);
    for j in 0..n {
        let (dx, dy) = (&partials[2 * j], &partials[2 * j + 1]);
        for (k, jj) in idx.iter().enumerate() {
            let (sign, m) = wedge_sign(*jj, j);
            if sign == 0 {
                continue;
            }
            // d/dzbar_j = (d/dx_j + i d/dy_j) / 2
            let d = (dx[k] + Complex64::i() * dy[k]) * 0.5;
            out.add_to(m, d * sign as f64);
        }
    }
    out
}

/// `dbar u` at `z` by central differences with step `h`.
pub fn dbar_fd(u: &dyn FormField, z: &CPoint, h: f64) -> Result<FormValue> {
    let p = real_partials(u, z, h)?;
    Ok(dbar_from_partials(u.n(), u.q(), &p))
}

/// `max_probes |dbar phi|`.
pub fn dbar_closed_residual(phi: &dyn FormField, probes: &[CPoint], h: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for z in probes {
        worst = worst.max(dbar_fd(phi, z, h)?.max_abs());
    }
    Ok(worst)
}

/// `dbar` of a field, evaluated by central differences on demand.
pub struct FdDbar {
    inner: Arc<dyn FormField>,
    h: f64,
}

impl FdDbar {
    pub fn new(inner: Arc<dyn FormField>, h: f64) -> Self {
        FdDbar { inner, h }
    }
}

impl FormField for FdDbar {
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn q(&self) -> usize {
        self.inner.q() + 1
    }
    fn eval(&self, z: &CPoint) -> FormValue {
        match dbar_fd(self.inner.as_ref(), z, self.h) {
            Ok(v) => v,
            Err(_) => {
                let mut v = FormValue::zeros(self.n(), self.q());
                v.coeffs_mut().iter_mut().for_each(|c| *c = Complex64::new(f64::NAN, f64::NAN));
                v
            }
        }
    }
    fn defined_at(&self, z: &CPoint) -> bool {
        let n = self.n();
        (0..2 * n).all(|m| {
            let e = CPoint::real_axis(n, m).scale(self.h);
            self.inner.defined_at(&(*z + e)) && self.inner.defined_at(&(*z - e))
        })
    }
}
