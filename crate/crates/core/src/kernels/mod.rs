//! Cauchy–Fantappiè kernels `Omega^0` (Bochner–Martinelli), `Omega^1` (Leray) and the
//! transition kernel `Omega^{01}` as explicit coefficient arrays.

pub mod coefficients;
pub mod det;
pub mod koppelman;
pub mod weights;

pub use coefficients::{
    omega01_coeffs, omega0_coeffs, omega1_coeffs, Guard, Kernel, KernelCoefficients, KernelKind,
};
pub use koppelman::{koppelman_residual, KoppelmanResidual};
pub use weights::CFWeight;
