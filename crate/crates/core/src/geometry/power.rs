//! The convexity gap `f(y) - f(x) - grad f(x).(y - x)` for sums of powers.

use rand::Rng;

use crate::stream_rng;

/// `f(x) = sum_j a_j |x^j|^{m_j}` where `x^j` are consecutive blocks of coordinates.
#[derive(Clone, Debug)]
pub struct PowerSum {
    blocks: Vec<(usize, f64, f64)>,
}

impl PowerSum {
    /// One block of size `dim` per `(dim, exponent, coefficient)`.
    pub fn new(blocks: Vec<(usize, f64, f64)>) -> Self {
        assert!(blocks.iter().all(|b| b.0 > 0 && b.1 > 1.0 && b.2 > 0.0));
        PowerSum { blocks }
    }

    /// `sum_j |x_j|^{m_j}`, one block per coordinate.
    pub fn coordinatewise(m: &[f64]) -> Self {
        PowerSum::new(m.iter().map(|&p| (1, p, 1.0)).collect())
    }

    /// `|x|^m` on R^dim.
    pub fn radial(dim: usize, m: f64) -> Self {
        PowerSum::new(vec![(dim, m, 1.0)])
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.0).sum()
    }

    fn exponent(&self) -> f64 {
        self.blocks.iter().map(|b| b.1).fold(2.0, f64::max)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let mut off = 0;
        let mut s = 0.0;
        for &(d, m, a) in &self.blocks {
            s += a * norm(&x[off..off + d]).powf(m);
            off += d;
        }
        s
    }

    /// Gradient; zero at the origin of a block (the one-sided value, since m > 1).
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        let mut off = 0;
        for &(d, m, a) in &self.blocks {
            let xb = &x[off..off + d];
            let nb = norm(xb);
            if nb > 0.0 {
                let c = a * m * nb.powf(m - 2.0);
                for k in 0..d {
                    g[off + k] = c * xb[k];
                }
            }
            off += d;
        }
        g
    }

    /// `(f(y) - f(x) - grad f(x).(y - x)) / |y - x|^{max(m, 2)}`; `+inf` when `y == x`.
    pub fn gap(&self, x: &[f64], y: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim());
        assert_eq!(y.len(), self.dim());
        let d: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
        let dist = norm(&d);
        if dist == 0.0 {
            return f64::INFINITY;
        }
        let g = self.gradient(x);
        let lin: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
        (self.value(y) - self.value(x) - lin) / dist.powf(self.exponent())
    }

    /// Smallest gap over `pairs` random pairs with `|x| + |y| < c0`; half of them are
    /// near-diagonal pairs at geometric scales. Returns the infimum and its witness.
    pub fn sampled_infimum(&self, pairs: usize, c0: f64, seed: u64) -> (f64, Vec<f64>, Vec<f64>) {
        use rayon::prelude::*;
        let dim = self.dim();
        let chunk = 1024;
        let chunks = pairs.div_ceil(chunk);
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = stream_rng(seed, c as u64);
                let mut best = (f64::INFINITY, vec![0.0; dim], vec![0.0; dim]);
                for k in 0..chunk.min(pairs - c * chunk) {
                    let x = ball_point(&mut rng, dim, 0.5 * c0);
                    let y = if k % 2 == 0 {
                        ball_point(&mut rng, dim, 0.5 * c0)
                    } else {
                        let s = 0.5 * c0 * 2f64.powf(-rng.random_range(1.0..20.0));
                        let u = ball_point(&mut rng, dim, 1.0);
                        let nu = norm(&u).max(1e-300);
                        let y: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + s * b / nu).collect();
                        if norm(&x) + norm(&y) >= c0 {
                            continue;
                        }
                        y
                    };
                    let q = self.gap(&x, &y);
                    if q < best.0 {
                        best = (q, x, y);
                    }
                }
                best
            })
            .reduce(
                || (f64::INFINITY, vec![0.0; dim], vec![0.0; dim]),
                |a, b| match a.0.total_cmp(&b.0).then_with(|| lex(&a.1, &b.1)).then_with(|| lex(&a.2, &b.2)) {
                    std::cmp::Ordering::Greater => b,
                    _ => a,
                },
            )
    }
}

/// Gap quotient for the coordinatewise sum `sum_j |x_j|^{m_j}`.
pub fn power_gap(m: &[f64], x: &[f64], y: &[f64]) -> f64 {
    PowerSum::coordinatewise(m).gap(x, y)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn lex(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
}

fn ball_point<R: Rng>(rng: &mut R, dim: usize, radius: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        if norm(&v) < 1.0 {
            return v.iter().map(|a| a * radius).collect();
        }
    }
}
