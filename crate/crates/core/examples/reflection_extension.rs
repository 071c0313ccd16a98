//! Extension of data across the boundary: analytic continuation versus reflection.

use std::sync::Arc;

use dbar_kernels::forms::{ExprField, FormField};
use dbar_kernels::geometry::CPoint;
use dbar_kernels::operators::{ExtensionMode, ExtensionOperator};
use dbar_kernels::{Domain, DomainSpec};

fn main() -> dbar_kernels::Result<()> {
    let dom = Domain::new(2, DomainSpec::Ball { radius: 1.0 })?;
    let phi: Arc<dyn FormField> = Arc::new(ExprField::scalar(2, "abs2(z1) + z2")?);
    for mode in [ExtensionMode::Analytic, ExtensionMode::Reflection] {
        let ext = ExtensionOperator::new(&dom, mode, 1e-4)?;
        let e = ext.extend(phi.clone());
        println!("{mode:?}");
        for t in [0.9, 1.0, 1.05, 1.1, 1.2] {
            let z = CPoint::from_reals(&[0.6 * t, 0.0, 0.0, 0.8 * t]);
            println!("  |z| = {t:.2}: E phi = {:.6}", e.eval(&z)[0]);
        }
    }
    Ok(())
}
