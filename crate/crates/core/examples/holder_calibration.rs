//! The Hölder estimator on functions with known seminorms.

use dbar_kernels::analysis::{holder_seminorm, Interval, PairSampler};
use num_complex::Complex64;

fn main() -> dbar_kernels::Result<()> {
    let pairs = PairSampler::new(100_000, 1).sample(&Interval { a: 0.0, b: 1.0 });
    let cases: [(&str, f64, f64, fn(f64) -> f64); 4] = [
        ("sqrt(x)", 0.5, 1.0, |x| x.max(0.0).sqrt()),
        ("x", 0.5, 1.0, |x| x),
        ("3", 0.5, 0.0, |_| 3.0),
        ("x^1.5", 1.5, 1.5, |x| x.abs().powf(1.5)),
    ];
    for (name, a, exact, g) in cases {
        let f = move |x: &[f64]| Ok(vec![Complex64::new(g(x[0]), 0.0)]);
        let est = holder_seminorm(&f, a, &pairs, 1e-7)?;
        println!("{name:<8} a = {a}: estimate {:.6} (exact {exact})", est.seminorm);
    }
    Ok(())
}
