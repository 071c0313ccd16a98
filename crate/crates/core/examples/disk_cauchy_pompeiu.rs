//! T_1 on the unit disk: the solution of dbar u = dzbar is zbar.

use std::sync::Arc;

use dbar_kernels::forms::{ExprField, FormField};
use dbar_kernels::operators::{apply_t, interior_probes, ExtensionMode, Operators, Resolution};
use dbar_kernels::{Domain, DomainSpec};

fn main() -> dbar_kernels::Result<()> {
    let dom = Domain::new(1, DomainSpec::Ball { radius: 1.0 })?;
    let ops = Operators::new(&dom, Resolution::default_for(&dom), ExtensionMode::Analytic, 1e-4)?;
    let phi: Arc<dyn FormField> = Arc::new(ExprField::from_pairs(1, 1, &[("1", "1")])?);
    let probes = interior_probes(&dom, 8, ops.probe_collar(), 1)?;
    let sol = apply_t(&ops, 1, phi, &probes)?;
    for v in &sol.values {
        let err = (v.value[0] - v.z[0].conj()).norm();
        println!("z = {}: T1 = {:.10}, error {err:.2e}", v.z, v.value[0]);
    }
    println!("homotopy residual {:.3e} (estimate {:.3e})", sol.residual.max_residual, sol.residual.max_estimate);
    Ok(())
}
