//! The cutoff `chi`, the extension operator `E` and the commutator `[dbar, E]`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{dbar_fd, wedge_sign, FormField, FormValue};
use crate::geometry::{CPoint, Domain};
use crate::quadrature::SphereRule;

/// `chi = 1 - s((r - delta/4) / (delta/2))` with the quintic smoothstep `s`: `chi = 1` on
/// `{r <= delta/4}`, `chi = 0` on `{r >= 3 delta/4}`, `C^2` across both levels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cutoff {
    pub delta: f64,
}

impl Cutoff {
    pub fn new(delta: f64) -> Self {
        Cutoff { delta }
    }

    fn t(&self, rv: f64) -> f64 {
        ((rv - 0.25 * self.delta) / (0.5 * self.delta)).clamp(0.0, 1.0)
    }

    /// `chi` as a function of the value of `r`.
    pub fn profile(&self, rv: f64) -> f64 {
        match self.t(rv) {
            t if t <= 0.0 => 1.0,
            t if t >= 1.0 => 0.0,
            t => 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t),
        }
    }

    /// `d chi / d r`.
    pub fn derivative(&self, rv: f64) -> f64 {
        let t = self.t(rv);
        -30.0 * t * t * (1.0 - t) * (1.0 - t) / (0.5 * self.delta)
    }

    /// `(d chi / d zbar_j)_j = chi'(r) conj(r_{z_j})`.
    pub fn dbar(&self, dom: &Domain, z: &CPoint) -> CPoint {
        let r = dom.defining_function();
        r.grad(z).conj().scale(self.derivative(r.value(z)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ExtensionMode {
    /// `E phi = chi phi` for data given by a global expression.
    #[default]
    Analytic,
    /// First-order Hestenes reflection along rays from the center, times `chi`.
    Reflection,
}

#[derive(Clone, Debug)]
pub struct ExtensionOperator {
    pub mode: ExtensionMode,
    dom: Domain,
    pub cutoff: Cutoff,
    /// Finite-difference step for the reflection-mode commutator.
    pub h: f64,
}

impl ExtensionOperator {
    pub fn new(dom: &Domain, mode: ExtensionMode, h: f64) -> Result<Self> {
        if mode == ExtensionMode::Reflection {
            let r = dom.defining_function();
            for (omega, _) in SphereRule::new(dom.n(), 8).nodes {
                let ok = dom
                    .boundary_point(&omega)
                    .map(|p| r.real_gradient(&p).real_dot(&omega) > 0.0)
                    .unwrap_or(false);
                if !ok {
                    return Err(Error::UnsupportedMode("reflection"));
                }
            }
        }
        Ok(ExtensionOperator { mode, dom: dom.clone(), cutoff: Cutoff::new(dom.delta()), h })
    }

    pub fn domain(&self) -> &Domain {
        &self.dom
    }

    /// The extension `E phi`, supported in `{r < 3 delta/4}`.
    pub fn extend(&self, phi: Arc<dyn FormField>) -> Arc<dyn FormField> {
        Arc::new(Extended { op: self.clone(), phi })
    }

    /// `[dbar, E] phi = dbar(E phi) - E(dbar phi)`; in analytic mode this is `dbar chi ^ phi`.
    /// `dbar_phi` is only used in reflection mode.
    pub fn commutator(&self, phi: Arc<dyn FormField>, dbar_phi: Arc<dyn FormField>) -> Arc<dyn FormField> {
        Arc::new(Commutator { op: self.clone(), ext: self.extend(phi.clone()), ext_dbar: self.extend(dbar_phi), phi })
    }

    fn reflect(&self, phi: &dyn FormField, z: &CPoint) -> FormValue {
        let c = self.dom.center();
        let v = *z - c;
        let t = v.norm();
        let omega = v.scale(1.0 / t);
        let Ok(tb) = self.dom.ray_exit(&c, &omega, 0.0) else {
            return nan_form(phi.n(), phi.q());
        };
        let s = t - tb;
        if s <= 0.0 {
            return phi.eval(z);
        }
        let p1 = c + omega.scale(tb - s);
        let p2 = c + omega.scale(tb - 0.5 * s);
        &(&phi.eval(&p2) * 4.0) - &(&phi.eval(&p1) * 3.0)
    }
}

fn nan_form(n: usize, q: usize) -> FormValue {
    let mut v = FormValue::zeros(n, q);
    v.coeffs_mut().iter_mut().for_each(|c| *c = Complex64::new(f64::NAN, f64::NAN));
    v
}

struct Extended {
    op: ExtensionOperator,
    phi: Arc<dyn FormField>,
}

impl FormField for Extended {
    fn n(&self) -> usize {
        self.phi.n()
    }
    fn q(&self) -> usize {
        self.phi.q()
    }
    fn eval(&self, z: &CPoint) -> FormValue {
        let rv = self.op.dom.defining_function().value(z);
        let chi = self.op.cutoff.profile(rv);
        if chi == 0.0 {
            return FormValue::zeros(self.n(), self.q());
        }
        match self.op.mode {
            ExtensionMode::Analytic => &self.phi.eval(z) * chi,
            ExtensionMode::Reflection if rv <= 0.0 => self.phi.eval(z),
            ExtensionMode::Reflection => &self.op.reflect(self.phi.as_ref(), z) * chi,
        }
    }
}

struct Commutator {
    op: ExtensionOperator,
    ext: Arc<dyn FormField>,
    ext_dbar: Arc<dyn FormField>,
    phi: Arc<dyn FormField>,
}

impl FormField for Commutator {
    fn n(&self) -> usize {
        self.phi.n()
    }
    fn q(&self) -> usize {
        self.phi.q() + 1
    }
    fn eval(&self, z: &CPoint) -> FormValue {
        let (n, q) = (self.n(), self.phi.q());
        match self.op.mode {
            ExtensionMode::Analytic => {
                let mut out = FormValue::zeros(n, q + 1);
                let rv = self.op.dom.defining_function().value(z);
                if self.op.cutoff.derivative(rv) == 0.0 || q >= n {
                    return out;
                }
                let dchi = self.op.cutoff.dbar(&self.op.dom, z);
                let phi = self.phi.eval(z);
                for (k, kk) in phi.indices().into_iter().enumerate() {
                    for j in 0..n {
                        let (sign, m) = wedge_sign(kk, j);
                        if sign != 0 {
                            out.add_to(m, dchi[j] * phi[k] * sign as f64);
                        }
                    }
                }
                out
            }
            ExtensionMode::Reflection => match dbar_fd(self.ext.as_ref(), z, self.op.h) {
                Ok(d) => &d - &self.ext_dbar.eval(z),
                Err(_) => nan_form(n, q + 1),
            },
        }
    }
}
