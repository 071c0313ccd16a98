//! Finite-difference check of the Koppelman identities
//! `dbar Omega^1 = 0` and `dbar Omega^{01} = Omega^0 - Omega^1` (dbar in both z and zeta).

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::coefficients::{Guard, Kernel};
use crate::error::{Error, Result};
use crate::forms::multi_index::{wedge_sign, MultiIndex};
use crate::geometry::{CPoint, DefiningFunction, Smoothness};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct KoppelmanResidual {
    /// `max |dbar Omega^1|`.
    pub leray_closed: f64,
    /// `max |dbar Omega^{01} - Omega^0 + Omega^1|`.
    pub transition: f64,
    /// Largest kernel coefficient at the point, for scale.
    pub scale: f64,
}

impl KoppelmanResidual {
    pub fn max(&self) -> f64 {
        self.leray_closed.max(self.transition)
    }
}

/// Total dbar (over the 2n variables `zetabar_1..n, zbar_1..n`) of a kernel's coefficient
/// vector, by central differences.
fn dbar_total(kernel: &Kernel, z: &CPoint, zeta: &CPoint, h: f64) -> Result<Vec<Complex64>> {
    let n = z.dim();
    let size = 1usize << (2 * n);
    let mut out = vec![Complex64::new(0.0, 0.0); size];
    for k in 0..2 * n {
        // derivative d/d(thetabar_k) = (d/dx + i d/dy) / 2 in the k-th complex variable
        let mut deriv = vec![Complex64::new(0.0, 0.0); size];
        for (part, factor) in [(0usize, Complex64::new(0.5, 0.0)), (1, Complex64::new(0.0, 0.5))] {
            let (var, j) = if k < n { (1, k) } else { (0, k - n) };
            let e = CPoint::real_axis(n, 2 * j + part).scale(h);
            let (zp, zm, zetap, zetam) = if var == 1 { (*z, *z, *zeta + e, *zeta - e) } else { (*z + e, *z - e, *zeta, *zeta) };
            let fp = kernel.total(&zp, &zetap)?;
            let fm = kernel.total(&zm, &zetam)?;
            for m in 0..size {
                deriv[m] += (fp[m] - fm[m]) / (2.0 * h) * factor;
            }
        }
        for (mask, d) in deriv.iter().enumerate() {
            let (sign, merged) = wedge_sign(MultiIndex::from_bits(mask as u32), k);
            if sign != 0 {
                out[merged.bits() as usize] += d * sign as f64;
            }
        }
    }
    Ok(out)
}

/// Koppelman residuals at `(z, zeta)` with step `h`. `r` must be smooth (mollify C^{1,1} inputs).
///
/// For n = 1 the transition kernel is absent and `transition` is `max |Omega^0 - Omega^1|`.
pub fn koppelman_residual(r: &Arc<dyn DefiningFunction>, z: &CPoint, zeta: &CPoint, h: f64) -> Result<KoppelmanResidual> {
    if r.smoothness() != Smoothness::Smooth {
        return Err(Error::OutOfScope("Koppelman residuals need a smooth defining function; mollify first".into()));
    }
    let g1 = r.grad(zeta);
    let w = *zeta - *z;
    let margin = w.norm().min(g1.pair(&w).norm() / g1.norm());
    if margin < 10.0 * h {
        return Err(Error::Margin { margin, required: 10.0 * h });
    }
    let guard = Guard::none();
    let k0 = Kernel::omega0(guard);
    let k1 = Kernel::omega1(r.clone(), guard);
    let k01 = Kernel::omega01(r.clone(), guard);
    let o0 = k0.total(z, zeta)?;
    let o1 = k1.total(z, zeta)?;
    let scale = o0.iter().chain(&o1).map(|c| c.norm()).fold(0.0, f64::max);

    let leray_closed = dbar_total(&k1, z, zeta, h)?.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let d01 = if z.dim() >= 2 { dbar_total(&k01, z, zeta, h)? } else { vec![Complex64::new(0.0, 0.0); o0.len()] };
    let transition = d01
        .iter()
        .zip(o0.iter().zip(&o1))
        .map(|(d, (a, b))| (d - (a - b)).norm())
        .fold(0.0, f64::max);
    Ok(KoppelmanResidual { leray_closed, transition, scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Quadric;

    #[test]
    fn ball_residual_is_second_order() {
        let r: Arc<dyn DefiningFunction> = Arc::new(Quadric::ball(CPoint::zeros(2), 1.0));
        let z = CPoint::from_reals(&[0.1, -0.2, 0.3, 0.05]);
        let zeta = CPoint::from_reals(&[0.7, 0.5, -0.3, 0.2]);
        let a = koppelman_residual(&r, &z, &zeta, 1e-3).unwrap();
        let b = koppelman_residual(&r, &z, &zeta, 5e-4).unwrap();
        assert!(a.max() < 1e-4 * a.scale, "{a:?}");
        let order = (a.max() / b.max()).log2();
        assert!((1.7..2.3).contains(&order), "order {order}");
    }

    #[test]
    fn n1_kernels_coincide() {
        let r: Arc<dyn DefiningFunction> = Arc::new(Quadric::ball(CPoint::zeros(1), 1.0));
        let z = CPoint::from_reals(&[0.1, -0.2]);
        let zeta = CPoint::from_reals(&[0.6, 0.8]);
        let res = koppelman_residual(&r, &z, &zeta, 1e-4).unwrap();
        assert!(res.transition < 1e-14);
    }
}
