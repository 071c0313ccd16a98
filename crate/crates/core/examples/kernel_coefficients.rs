//! Kernel coefficients at one point pair; in one variable both kernels are the Cauchy kernel.

use std::f64::consts::PI;
use std::sync::Arc;

use dbar_kernels::geometry::{CPoint, DefiningFunction, Quadric};
use dbar_kernels::kernels::{omega01_coeffs, omega0_coeffs, omega1_coeffs, Guard};
use num_complex::Complex64;

fn main() -> dbar_kernels::Result<()> {
    let g = Guard::none();
    let disk: Arc<dyn DefiningFunction> = Arc::new(Quadric::ball(CPoint::zeros(1), 1.0));
    let z = CPoint::from_reals(&[0.2, -0.1]);
    let zeta = CPoint::from_reals(&[0.6, 0.8]);
    let cauchy = 1.0 / (Complex64::new(0.0, 2.0 * PI) * (zeta[0] - z[0]));
    println!("n = 1: Omega0 {:.6}", omega0_coeffs(&z, &zeta, 0, &g)?.values()[0]);
    println!("       Omega1 {:.6}", omega1_coeffs(&disk, &z, &zeta, 0, &g)?.values()[0]);
    println!("       Cauchy {cauchy:.6}");

    let ball: Arc<dyn DefiningFunction> = Arc::new(Quadric::ball(CPoint::zeros(2), 1.0));
    let z = CPoint::from_reals(&[0.1, 0.2, -0.3, 0.0]);
    let zeta = CPoint::from_reals(&[0.5, 0.5, 0.5, -0.5]);
    for q in 0..2 {
        let k = omega0_coeffs(&z, &zeta, q, &g)?;
        println!("n = 2, Omega0 bidegree (0,{q}) in z:");
        for (l, j, v) in k.entries() {
            println!("  dzetabar{l} dzbar{j}: {v:.6e}");
        }
    }
    let k01 = omega01_coeffs(&ball, &z, &zeta, 0, &g)?;
    println!("n = 2, Omega01 (0,0): {} coefficients, max {:.6e}", k01.entries().len(), k01.max_abs());
    Ok(())
}
