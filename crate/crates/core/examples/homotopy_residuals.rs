//! Residual of phi = dbar T_1 phi + T_2 dbar phi (and the same for H) on the ball,
//! under joint refinement of all rules.

use std::sync::Arc;

use dbar_kernels::forms::{ExprField, FormField};
use dbar_kernels::operators::{homotopy_residual, interior_probes, ExtensionMode, OperatorTag, Operators, Resolution};
use dbar_kernels::{Domain, DomainSpec};

fn main() -> dbar_kernels::Result<()> {
    let dom = Domain::new(2, DomainSpec::Ball { radius: 1.0 })?;
    // phi = dbar(z2 zbar1)
    let phi: Arc<dyn FormField> = Arc::new(ExprField::from_pairs(2, 1, &[("1", "z2")])?);
    let levels = [Resolution::new(32, 8, 0.2), Resolution::new(64, 16, 0.1)];
    let coarse = Operators::new(&dom, levels[0], ExtensionMode::Analytic, 1e-4)?;
    let probes = interior_probes(&dom, 4, coarse.probe_collar(), 3)?;
    for tag in [OperatorTag::T, OperatorTag::H] {
        for res in levels {
            let ops = Operators::new(&dom, res, ExtensionMode::Analytic, 1e-4)?;
            let rep = homotopy_residual(&ops, tag, 1, phi.clone(), None, &probes)?;
            println!(
                "{} N = ({}, {}): residual {:.3e}, estimate {:.3e}",
                tag.name(),
                res.boundary,
                res.volume,
                rep.max_residual,
                rep.max_estimate
            );
        }
    }
    Ok(())
}
