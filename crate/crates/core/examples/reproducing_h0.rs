//! Both expressions of H_0 reproduce holomorphic functions on the ball.

use std::sync::Arc;

use dbar_kernels::forms::{ExprField, FormField};
use dbar_kernels::operators::{apply_h0, interior_probes, ExtensionMode, Operators, Resolution};
use dbar_kernels::{Domain, DomainSpec};

fn main() -> dbar_kernels::Result<()> {
    let dom = Domain::new(2, DomainSpec::Ball { radius: 1.0 })?;
    let ops = Operators::new(&dom, Resolution::new(32, 16, 0.05), ExtensionMode::Analytic, 1e-4)?;
    let probes = interior_probes(&dom, 4, ops.probe_collar(), 5)?;
    for src in ["1", "z1*z2", "exp(z1) + z2^3"] {
        let phi: Arc<dyn FormField> = Arc::new(ExprField::scalar(2, src)?);
        let sol = apply_h0(&ops, phi.clone(), None, &probes)?;
        let err = sol
            .values
            .iter()
            .map(|v| {
                let f = phi.eval(&v.z)[0];
                (v.boundary_form[0] - f).norm().max((v.commutator_form[0] - f).norm())
            })
            .fold(0.0, f64::max);
        println!("{src:<16} max error {err:.3e}, discrepancy {:.3e}", sol.max_discrepancy);
    }
    Ok(())
}
