//! Forms from expressions, finite-difference dbar, and closedness of dbar u.

use std::sync::Arc;

use dbar_kernels::forms::{dbar_closed_residual, dbar_fd, ExprField, FdDbar, FormField};
use dbar_kernels::geometry::CPoint;

fn main() -> dbar_kernels::Result<()> {
    let u: Arc<dyn FormField> = Arc::new(ExprField::scalar(2, "abs2(z1)*z2 + exp(z2)*zb2")?);
    let z = CPoint::from_reals(&[0.3, 0.1, -0.2, 0.4]);
    let du = dbar_fd(u.as_ref(), &z, 1e-4)?;
    for (jj, v) in du.indices().iter().zip(du.coeffs()) {
        println!("(dbar u)_{jj} = {v:.10}");
    }
    // closed form: z1 z2 dzbar1 + exp(z2) dzbar2
    let exact = ExprField::from_pairs(2, 1, &[("1", "z1*z2"), ("2", "exp(z2)")])?;
    println!("error vs closed form: {:.3e}", (&du - &exact.eval(&z)).max_abs());
    let phi = FdDbar::new(u, 1e-4);
    let probes = [z, CPoint::from_reals(&[-0.1, 0.2, 0.0, -0.3])];
    println!("|dbar dbar u| at probes: {:.3e}", dbar_closed_residual(&phi, &probes, 1e-3)?);
    Ok(())
}
