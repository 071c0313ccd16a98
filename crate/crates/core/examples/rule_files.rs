//! Writes a boundary rule to disk and reads it back.

use dbar_kernels::quadrature::{read_rule, write_boundary_rule, BoundaryRule, RuleFile};
use dbar_kernels::{Domain, DomainSpec};

fn main() -> dbar_kernels::Result<()> {
    let dom = Domain::new(2, DomainSpec::Ball { radius: 1.0 })?;
    let rule = BoundaryRule::build(&dom, 16)?;
    let path = std::env::temp_dir().join("ball_boundary_16.dbqr");
    write_boundary_rule(&path, &rule)?;
    match read_rule(&path)? {
        RuleFile::Boundary(r) => println!("read {} fine nodes, area {:.10} (S^3: {:.10})", r.fine().len(), r.area(), 2.0 * std::f64::consts::PI.powi(2)),
        RuleFile::Volume(_) => println!("unexpected volume rule"),
    }
    std::fs::remove_file(&path)?;
    Ok(())
}
