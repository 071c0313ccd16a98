//! Convexity gap of `sum |x_j|^m` normalised by `|y - x|^max(m, 2)`.

use dbar_kernels::geometry::PowerSum;

fn main() {
    for m in [1.5, 2.0, 3.0, 4.0] {
        let f = PowerSum::coordinatewise(&[m; 4]);
        let (inf, x, y) = f.sampled_infimum(50_000, 2.0, 1);
        println!("m = {m}: inf {inf:.6e}");
        println!("    x = {x:.4?}");
        println!("    y = {y:.4?}");
    }
}
