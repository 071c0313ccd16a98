//! The extension operator, the solution operators `T_q`, `H_q`, `H_0` and homotopy residuals.

pub mod extension;
pub mod residual;
pub mod solve;

pub use extension::{Cutoff, ExtensionMode, ExtensionOperator};
pub use residual::{
    apply_h, apply_h0, apply_t, h0_identity_residual, homotopy_residual, interior_probes, write_h0_csv,
    write_solution_csv, H0Solution, H0Value, HomotopySolution, ProbeValue, ResidualReport, ResidualRow,
};
pub use solve::{mollifier_k, Evaluator, OperatorTag, Operators, Resolution};
