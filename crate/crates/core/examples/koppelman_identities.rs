//! Finite-difference residuals of the Koppelman identities shrink like h^2.

use std::sync::Arc;

use dbar_kernels::geometry::{CPoint, DefiningFunction, Quadric};
use dbar_kernels::kernels::koppelman_residual;

fn main() -> dbar_kernels::Result<()> {
    let r: Arc<dyn DefiningFunction> = Arc::new(Quadric::ellipsoid(CPoint::zeros(2), &[1.0, 1.5, 0.7, 2.0]));
    let z = CPoint::from_reals(&[0.1, -0.2, 0.15, 0.3]);
    let zeta = CPoint::from_reals(&[0.8, 0.4, -0.3, 0.9]);
    let mut prev: Option<f64> = None;
    for h in [1e-2, 1e-3, 1e-4] {
        let k = koppelman_residual(&r, &z, &zeta, h)?;
        let order = prev.map(|p| (p / k.max()).log10()).unwrap_or(f64::NAN);
        println!("h = {h:.0e}: leray_closed {:.3e}  transition {:.3e}  order {order:.3}", k.leray_closed, k.transition);
        prev = Some(k.max());
    }
    Ok(())
}
