use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use super::multi_index::{binomial, combos, rank, MultiIndex};

/// Coefficients of a (0,q)-form at one point, ordered as [`combos`]`(n, q)`.
#[derive(Clone, PartialEq)]
pub struct FormValue {
    n: usize,
    q: usize,
    coeffs: Vec<Complex64>,
}

impl FormValue {
    pub fn zeros(n: usize, q: usize) -> Self {
        FormValue { n, q, coeffs: vec![Complex64::new(0.0, 0.0); binomial(n, q)] }
    }

    pub fn scalar(n: usize, v: Complex64) -> Self {
        FormValue { n, q: 0, coeffs: vec![v] }
    }

    pub fn from_coeffs(n: usize, q: usize, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len(), binomial(n, q));
        FormValue { n, q, coeffs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn indices(&self) -> Vec<MultiIndex> {
        combos(self.n, self.q)
    }

    pub fn get(&self, jj: MultiIndex) -> Complex64 {
        debug_assert_eq!(jj.len(), self.q);
        self.coeffs[rank(self.n, jj)]
    }

    pub fn set(&mut self, jj: MultiIndex, v: Complex64) {
        let k = rank(self.n, jj);
        self.coeffs[k] = v;
    }

    pub fn add_to(&mut self, jj: MultiIndex, v: Complex64) {
        let k = rank(self.n, jj);
        self.coeffs[k] += v;
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        FormValue { n: self.n, q: self.q, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Index<usize> for FormValue {
    type Output = Complex64;
    fn index(&self, k: usize) -> &Complex64 {
        &self.coeffs[k]
    }
}

impl IndexMut<usize> for FormValue {
    fn index_mut(&mut self, k: usize) -> &mut Complex64 {
        &mut self.coeffs[k]
    }
}

impl Add for &FormValue {
    type Output = FormValue;
    fn add(self, o: &FormValue) -> FormValue {
        assert_eq!((self.n, self.q), (o.n, o.q));
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        FormValue { n: self.n, q: self.q, coeffs }
    }
}

impl Sub for &FormValue {
    type Output = FormValue;
    fn sub(self, o: &FormValue) -> FormValue {
        assert_eq!((self.n, self.q), (o.n, o.q));
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect();
        FormValue { n: self.n, q: self.q, coeffs }
    }
}

impl Mul<f64> for &FormValue {
    type Output = FormValue;
    fn mul(self, s: f64) -> FormValue {
        self.scale(Complex64::new(s, 0.0))
    }
}

impl fmt::Debug for FormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (j, c) in self.indices().iter().zip(&self.coeffs) {
            m.entry(j, c);
        }
        m.finish()
    }
}

/// Serialized as a map from multi-index (`"(1,2)"`) to `[re, im]`.
impl serde::Serialize for FormValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.coeffs.len()))?;
        for (jj, c) in self.indices().into_iter().zip(&self.coeffs) {
            m.serialize_entry(&jj.to_string(), &[c.re, c.im])?;
        }
        m.end()
    }
}
