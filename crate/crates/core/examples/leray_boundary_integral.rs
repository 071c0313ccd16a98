//! The Leray boundary integral reproduces a holomorphic polynomial inside the ball.

use dbar_kernels::forms::ExprField;
use dbar_kernels::geometry::CPoint;
use dbar_kernels::kernels::{Guard, Kernel};
use dbar_kernels::quadrature::{integrate_kernel_boundary, BoundaryRule};
use dbar_kernels::{Domain, DomainSpec};

fn main() -> dbar_kernels::Result<()> {
    let dom = Domain::new(2, DomainSpec::Ball { radius: 1.0 })?;
    let f = ExprField::scalar(2, "z1^2*z2 + 3*z2")?;
    let kernel = Kernel::omega1(dom.defining_function().clone(), Guard::for_scale(dom.diameter()));
    let z = CPoint::from_reals(&[0.2, 0.1, -0.3, 0.25]);
    let exact = z[0] * z[0] * z[1] + 3.0 * z[1];
    for n in [24, 32, 48, 64] {
        let rule = BoundaryRule::build(&dom, n)?;
        let v = integrate_kernel_boundary(&rule, &kernel, &f, &z, 0)?;
        let err = (v.value[0] - exact).norm();
        println!("N = {n:>2}: {} nodes, error {err:.3e}, estimate {:.3e}", rule.fine().len(), v.error);
    }
    Ok(())
}
