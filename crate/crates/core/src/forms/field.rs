use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::expr::Expr;
use super::multi_index::{binomial, MultiIndex};
use super::value::FormValue;
use crate::error::{Error, Result};
use crate::geometry::CPoint;

/// A (0,q)-form field on (a subset of) C^n.
pub trait FormField: Send + Sync {
    fn n(&self) -> usize;
    fn q(&self) -> usize;
    fn eval(&self, z: &CPoint) -> FormValue;

    /// Whether `z` lies where the field is defined.
    fn defined_at(&self, _z: &CPoint) -> bool {
        true
    }
}

impl fmt::Debug for dyn FormField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormField(n={}, q={})", self.n(), self.q())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ZeroField {
    pub n: usize,
    pub q: usize,
}

impl FormField for ZeroField {
    fn n(&self) -> usize {
        self.n
    }
    fn q(&self) -> usize {
        self.q
    }
    fn eval(&self, _z: &CPoint) -> FormValue {
        FormValue::zeros(self.n, self.q)
    }
}

/// A field given by a closure.
pub struct FnField<F> {
    n: usize,
    q: usize,
    f: F,
}

impl<F: Fn(&CPoint) -> FormValue + Send + Sync> FnField<F> {
    pub fn new(n: usize, q: usize, f: F) -> Self {
        FnField { n, q, f }
    }
}

impl<F: Fn(&CPoint) -> FormValue + Send + Sync> FormField for FnField<F> {
    fn n(&self) -> usize {
        self.n
    }
    fn q(&self) -> usize {
        self.q
    }
    fn eval(&self, z: &CPoint) -> FormValue {
        (self.f)(z)
    }
}

/// Scalar field from a closure.
pub fn scalar_field<F>(n: usize, f: F) -> FnField<impl Fn(&CPoint) -> FormValue + Send + Sync>
where
    F: Fn(&CPoint) -> Complex64 + Send + Sync,
{
    FnField::new(n, 0, move |z| FormValue::scalar(n, f(z)))
}

/// A form whose coefficients are parsed expressions; absent indices are zero.
#[derive(Clone, Debug)]
pub struct ExprField {
    n: usize,
    q: usize,
    terms: Vec<(MultiIndex, Expr)>,
}

impl ExprField {
    /// Coefficients keyed by 1-based index lists (`"1"`, `"1,2"`, or `""` for a scalar).
    pub fn new(n: usize, q: usize, coeffs: &BTreeMap<String, String>) -> Result<Self> {
        if q > n {
            return Err(Error::Config(format!("form degree {q} exceeds dimension {n}")));
        }
        let mut terms = Vec::new();
        for (key, src) in coeffs {
            let jj = MultiIndex::parse(key, n)
                .ok_or_else(|| Error::Config(format!("bad multi-index key {key:?} for n = {n}")))?;
            if jj.len() != q {
                return Err(Error::Config(format!("multi-index {key:?} does not have length {q}")));
            }
            terms.push((jj, Expr::parse(src, n)?));
        }
        Ok(ExprField { n, q, terms })
    }

    pub fn scalar(n: usize, src: &str) -> Result<Self> {
        Ok(ExprField { n, q: 0, terms: vec![(MultiIndex::EMPTY, Expr::parse(src, n)?)] })
    }

    /// Convenience for literal coefficient lists.
    pub fn from_pairs(n: usize, q: usize, pairs: &[(&str, &str)]) -> Result<Self> {
        let map = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        ExprField::new(n, q, &map)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, e)| e.is_zero())
    }
}

impl FormField for ExprField {
    fn n(&self) -> usize {
        self.n
    }
    fn q(&self) -> usize {
        self.q
    }
    fn eval(&self, z: &CPoint) -> FormValue {
        let mut v = FormValue::zeros(self.n, self.q);
        debug_assert_eq!(v.coeffs().len(), binomial(self.n, self.q));
        for (jj, e) in &self.terms {
            v.add_to(*jj, e.eval(z));
        }
        v
    }
}

/// `sum_k c_k f_k` for fields of equal type.
pub struct Combination {
    parts: Vec<(Complex64, Arc<dyn FormField>)>,
}

impl Combination {
    pub fn new(parts: Vec<(Complex64, Arc<dyn FormField>)>) -> Self {
        assert!(!parts.is_empty());
        let (n, q) = (parts[0].1.n(), parts[0].1.q());
        assert!(parts.iter().all(|(_, f)| f.n() == n && f.q() == q));
        Combination { parts }
    }
}

impl FormField for Combination {
    fn n(&self) -> usize {
        self.parts[0].1.n()
    }
    fn q(&self) -> usize {
        self.parts[0].1.q()
    }
    fn eval(&self, z: &CPoint) -> FormValue {
        let mut acc = FormValue::zeros(self.n(), self.q());
        for (c, f) in &self.parts {
            acc = &acc + &f.eval(z).scale(*c);
        }
        acc
    }
    fn defined_at(&self, z: &CPoint) -> bool {
        self.parts.iter().all(|(_, f)| f.defined_at(z))
    }
}
