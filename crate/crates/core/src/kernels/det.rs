//! Small determinants (n <= 4), including polynomial entries.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::geometry::MAX_DIM;

pub type Mat = [[Complex64; MAX_DIM]; MAX_DIM];

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn perms_of(n: usize) -> Vec<([usize; MAX_DIM], i32)> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, sign: i32, out: &mut Vec<([usize; MAX_DIM], i32)>) {
        if k == p.len() {
            let mut a = [0; MAX_DIM];
            a[..p.len()].copy_from_slice(p);
            out.push((a, sign));
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, if i == k { sign } else { -sign }, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, 1, &mut out);
    out
}

/// Permutations of `0..n` with their signs.
pub fn permutations(n: usize) -> &'static [([usize; MAX_DIM], i32)] {
    static TABLE: OnceLock<Vec<Vec<([usize; MAX_DIM], i32)>>> = OnceLock::new();
    &TABLE.get_or_init(|| (0..=MAX_DIM).map(perms_of).collect())[n]
}

/// Determinant of the leading `n x n` block.
pub fn det(n: usize, m: &Mat) -> Complex64 {
    match n {
        0 => Complex64::new(1.0, 0.0),
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => permutations(n)
            .iter()
            .map(|(p, s)| (0..n).map(|i| m[i][p[i]]).product::<Complex64>() * *s as f64)
            .sum(),
    }
}

/// Determinant of a matrix whose entries are `a + t b`, as polynomial coefficients in `t`
/// (index = power, length `n + 1`).
pub fn det_linear_pencil(n: usize, a: &Mat, b: &Mat) -> [Complex64; MAX_DIM + 1] {
    let mut out = [ZERO; MAX_DIM + 1];
    for (p, s) in permutations(n) {
        let mut poly = [ZERO; MAX_DIM + 1];
        poly[0] = Complex64::new(*s as f64, 0.0);
        for i in 0..n {
            let (ai, bi) = (a[i][p[i]], b[i][p[i]]);
            for d in (0..=i + 1).rev() {
                let lower = if d > 0 { poly[d - 1] * bi } else { ZERO };
                poly[d] = poly[d] * ai + lower;
            }
        }
        for d in 0..=n {
            out[d] += poly[d];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(4).iter().map(|p| p.1).sum::<i32>(), 0);
    }

    #[test]
    fn det_matches_elimination() {
        let mut m = [[ZERO; MAX_DIM]; MAX_DIM];
        let vals = [[2.0, 1.0, 0.5], [0.0, 3.0, 1.0], [1.0, -1.0, 4.0]];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = c(vals[i][j], 0.0);
            }
        }
        // 2(12+1) - 1(0-1) + 0.5(0-3)
        assert!((det(3, &m) - c(26.0 + 1.0 - 1.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn pencil_coefficients() {
        let mut a = [[ZERO; MAX_DIM]; MAX_DIM];
        let mut b = [[ZERO; MAX_DIM]; MAX_DIM];
        a[0][0] = c(1.0, 0.0);
        a[1][1] = c(2.0, 0.0);
        b[0][0] = c(1.0, 0.0);
        b[1][1] = c(0.0, 1.0);
        // (1 + t)(2 + i t) = 2 + (2 + i) t + i t^2
        let p = det_linear_pencil(2, &a, &b);
        assert!((p[0] - c(2.0, 0.0)).norm() < 1e-15);
        assert!((p[1] - c(2.0, 1.0)).norm() < 1e-15);
        assert!((p[2] - c(0.0, 1.0)).norm() < 1e-15);
    }
}
