use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use super::MAX_DIM;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A point (or complex vector) in C^n with n <= [`MAX_DIM`].
///
/// Real coordinates are ordered `x_1, y_1, ..., x_n, y_n` with `z_j = x_j + i y_j`.
#[derive(Clone, Copy, PartialEq)]
pub struct CPoint {
    n: usize,
    c: [Complex64; MAX_DIM],
}

impl CPoint {
    pub fn zeros(n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&n), "dimension {n} out of range");
        CPoint { n, c: [ZERO; MAX_DIM] }
    }

    pub fn new(coords: &[Complex64]) -> Self {
        let mut p = CPoint::zeros(coords.len());
        p.c[..coords.len()].copy_from_slice(coords);
        p
    }

    pub fn from_reals(xy: &[f64]) -> Self {
        assert!(xy.len() % 2 == 0, "odd number of real coordinates");
        let mut p = CPoint::zeros(xy.len() / 2);
        for j in 0..p.n {
            p.c[j] = Complex64::new(xy[2 * j], xy[2 * j + 1]);
        }
        p
    }

    /// Unit vector along real coordinate `m` (0-based, `x_1, y_1, ...`).
    pub fn real_axis(n: usize, m: usize) -> Self {
        let mut p = CPoint::zeros(n);
        p.c[m / 2] = if m % 2 == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 1.0) };
        p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.c[..self.n]
    }

    pub fn to_reals(&self) -> Vec<f64> {
        self.coords().iter().flat_map(|c| [c.re, c.im]).collect()
    }

    pub fn real(&self, m: usize) -> f64 {
        let c = self.c[m / 2];
        if m % 2 == 0 {
            c.re
        } else {
            c.im
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords().iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn conj(&self) -> Self {
        let mut p = *self;
        for c in &mut p.c[..self.n] {
            *c = c.conj();
        }
        p
    }

    /// Bilinear pairing `sum_j a_j b_j` (no conjugation).
    pub fn pair(&self, other: &CPoint) -> Complex64 {
        self.coords().iter().zip(other.coords()).map(|(a, b)| a * b).sum()
    }

    /// Real inner product of the underlying R^{2n} vectors, `Re sum_j a_j conj(b_j)`.
    pub fn real_dot(&self, other: &CPoint) -> f64 {
        self.coords().iter().zip(other.coords()).map(|(a, b)| (a * b.conj()).re).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut p = *self;
        for c in &mut p.c[..self.n] {
            *c *= s;
        }
        p
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Lexicographic comparison of real coordinates, used for deterministic tie-breaking.
    pub fn lex_cmp(&self, other: &CPoint) -> std::cmp::Ordering {
        for m in 0..2 * self.n {
            match self.real(m).total_cmp(&other.real(m)) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl Index<usize> for CPoint {
    type Output = Complex64;
    fn index(&self, j: usize) -> &Complex64 {
        &self.coords()[j]
    }
}

impl IndexMut<usize> for CPoint {
    fn index_mut(&mut self, j: usize) -> &mut Complex64 {
        assert!(j < self.n);
        &mut self.c[j]
    }
}

impl Add for CPoint {
    type Output = CPoint;
    fn add(mut self, rhs: CPoint) -> CPoint {
        debug_assert_eq!(self.n, rhs.n);
        for j in 0..self.n {
            self.c[j] += rhs.c[j];
        }
        self
    }
}

impl Sub for CPoint {
    type Output = CPoint;
    fn sub(mut self, rhs: CPoint) -> CPoint {
        debug_assert_eq!(self.n, rhs.n);
        for j in 0..self.n {
            self.c[j] -= rhs.c[j];
        }
        self
    }
}

impl Neg for CPoint {
    type Output = CPoint;
    fn neg(self) -> CPoint {
        self.scale(-1.0)
    }
}

impl Mul<CPoint> for f64 {
    type Output = CPoint;
    fn mul(self, rhs: CPoint) -> CPoint {
        rhs.scale(self)
    }
}

impl Mul<Complex64> for CPoint {
    type Output = CPoint;
    fn mul(mut self, rhs: Complex64) -> CPoint {
        for c in &mut self.c[..self.n] {
            *c *= rhs;
        }
        self
    }
}

impl fmt::Debug for CPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords()).finish()
    }
}

impl fmt::Display for CPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, c) in self.coords().iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:.6}{:+.6}i", c.re, c.im)?;
        }
        write!(f, ")")
    }
}

/// Square complex matrix of size n <= [`MAX_DIM`], row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct CMatrix {
    n: usize,
    m: [[Complex64; MAX_DIM]; MAX_DIM],
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&n));
        CMatrix { n, m: [[ZERO; MAX_DIM]; MAX_DIM] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, Complex64::new(1.0, 0.0))
    }

    pub fn scaled_identity(n: usize, s: Complex64) -> Self {
        let mut a = CMatrix::zeros(n);
        for j in 0..n {
            a.m[j][j] = s;
        }
        a
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.m[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.m[i][j] = v;
    }

    pub fn max_abs(&self) -> f64 {
        let mut out = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                out = out.max(self.m[i][j].norm());
            }
        }
        out
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.n).map(|i| &self.m[i][..self.n])).finish()
    }
}
