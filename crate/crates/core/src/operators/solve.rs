//! The solution operators `T_q`, `H_q` and `H_0` evaluated pointwise by quadrature.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::extension::{ExtensionMode, ExtensionOperator};
use crate::error::{Error, Result};
use crate::forms::{FdDbar, FormField, ZeroField};
use crate::geometry::{
    estimate_condition, mollify, CPoint, ConditionTag, DefiningFunction, Domain, SamplerConfig, Smoothness,
};
use crate::kernels::{Guard, Kernel};
use crate::quadrature::{
    integrate_boundary_samples, integrate_volume_samples, BoundaryRule, FieldSamples, Integral, Region, VolumeRule,
};

/// Rule resolutions: boundary `N`, volume `N` (per angle) and the exclusion radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    pub boundary: usize,
    pub volume: usize,
    pub epsilon: f64,
}

impl Resolution {
    pub fn new(boundary: usize, volume: usize, epsilon: f64) -> Self {
        Resolution { boundary, volume, epsilon }
    }

    /// Defaults for `dom`: boundary 32, volume 16, `epsilon = 0.05 * diameter`.
    pub fn default_for(dom: &Domain) -> Self {
        Resolution { boundary: 32, volume: 16, epsilon: 0.05 * dom.diameter() }
    }

    /// `N -> 2N`, `epsilon -> epsilon / 2`.
    pub fn refined(&self) -> Self {
        Resolution { boundary: 2 * self.boundary, volume: 2 * self.volume, epsilon: 0.5 * self.epsilon }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorTag {
    T,
    H,
}

impl OperatorTag {
    pub fn name(self) -> &'static str {
        match self {
            OperatorTag::T => "T",
            OperatorTag::H => "H",
        }
    }
}

/// Pointwise evaluation of an operator applied to fixed data.
pub type Evaluator<'a> = Box<dyn Fn(&CPoint) -> Result<Integral> + Send + Sync + 'a>;

/// Shared state for all operators on one domain: rules, kernels and the extension.
#[derive(Clone, Debug)]
pub struct Operators {
    dom: Domain,
    r_kernel: Arc<dyn DefiningFunction>,
    res: Resolution,
    guard: Guard,
    boundary: BoundaryRule,
    shell: VolumeRule,
    extension: ExtensionOperator,
    h: f64,
}

/// Width parameter `k` (Gaussian width `1/k`) of the mollified weight for C^{1,1} boundaries.
pub fn mollifier_k(dom: &Domain) -> u32 {
    (100.0 / dom.diameter()).ceil() as u32
}

impl Operators {
    /// `h` is the finite-difference step used for `dbar` of data and for the reflection
    /// commutator.
    pub fn new(dom: &Domain, res: Resolution, mode: ExtensionMode, h: f64) -> Result<Self> {
        let r = dom.defining_function().clone();
        let r_kernel = match r.smoothness() {
            Smoothness::Smooth => r,
            Smoothness::C11 => mollify(&r, mollifier_k(dom)),
        };
        Ok(Operators {
            dom: dom.clone(),
            r_kernel,
            res,
            guard: Guard::for_scale(dom.diameter()),
            boundary: BoundaryRule::build(dom, res.boundary)?,
            shell: VolumeRule::build(dom, Region::UMinusD, res.volume, None)?,
            extension: ExtensionOperator::new(dom, mode, h)?,
            h,
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.dom
    }

    pub fn resolution(&self) -> Resolution {
        self.res
    }

    pub fn extension(&self) -> &ExtensionOperator {
        &self.extension
    }

    pub fn boundary_rule(&self) -> &BoundaryRule {
        &self.boundary
    }

    pub fn shell_rule(&self) -> &VolumeRule {
        &self.shell
    }

    /// The defining function inside `Omega^1` and `Omega^{01}` (mollified for C^{1,1} domains).
    pub fn kernel_function(&self) -> &Arc<dyn DefiningFunction> {
        &self.r_kernel
    }

    pub fn fd_step(&self) -> f64 {
        self.h
    }

    /// Probe collar `max(2h, 2 * node spacing)`.
    pub fn probe_collar(&self) -> f64 {
        (2.0 * self.h).max(2.0 * self.boundary.spacing())
    }

    fn omega0(&self) -> Kernel {
        Kernel::omega0(self.guard)
    }

    fn omega1(&self) -> Kernel {
        Kernel::omega1(self.r_kernel.clone(), self.guard)
    }

    fn omega01(&self) -> Kernel {
        Kernel::omega01(self.r_kernel.clone(), self.guard)
    }

    fn polar(&self, region: Region, z: &CPoint) -> Result<VolumeRule> {
        VolumeRule::build(&self.dom, region, self.res.volume, Some((*z, self.res.epsilon)))
    }

    fn check_degree(&self, q: usize, phi: &dyn FormField) -> Result<()> {
        let n = self.dom.n();
        if phi.n() != n {
            return Err(Error::Dimension(phi.n()));
        }
        if q < 1 || q > n || phi.q() != q {
            return Err(Error::Degree { kernel: "solution operator", q, n });
        }
        Ok(())
    }

    /// `T_q phi(z) = -int_{bD} Omega^{01}_{0,q-1} ^ phi + int_D Omega^0_{0,q-1} ^ phi`; the
    /// boundary term is absent when `q - 1 > n - 2`.
    pub fn t_operator<'a>(&'a self, q: usize, phi: Arc<dyn FormField>) -> Result<Evaluator<'a>> {
        self.check_degree(q, phi.as_ref())?;
        let n = self.dom.n();
        let bnd = (q + 1 <= n).then(|| FieldSamples::on_boundary(&self.boundary, phi.as_ref()));
        let (k0, k01) = (self.omega0(), self.omega01());
        Ok(Box::new(move |z: &CPoint| {
            let rule = self.polar(Region::D, z)?;
            let samples = FieldSamples::on_volume(&rule, phi.as_ref());
            let vol = integrate_volume_samples(&rule, &k0, &samples, z, q - 1)?;
            match &bnd {
                Some(s) => Ok(vol.sub(&integrate_boundary_samples(&self.boundary, &k01, s, z, q - 1)?)),
                None => Ok(vol),
            }
        }))
    }

    /// `dbar phi`, either supplied or by central differences.
    pub fn dbar_of(&self, phi: &Arc<dyn FormField>, dbar_phi: Option<Arc<dyn FormField>>) -> Arc<dyn FormField> {
        dbar_phi.unwrap_or_else(|| Arc::new(FdDbar::new(phi.clone(), self.h)))
    }

    /// `H_q phi(z) = int_U Omega^0_{0,q-1} ^ E phi + int_{U \ D} Omega^{01}_{0,q-1} ^ [dbar, E] phi`.
    pub fn h_operator<'a>(
        &'a self,
        q: usize,
        phi: Arc<dyn FormField>,
        dbar_phi: Option<Arc<dyn FormField>>,
    ) -> Result<Evaluator<'a>> {
        self.check_degree(q, phi.as_ref())?;
        let n = self.dom.n();
        let ephi = self.extension.extend(phi.clone());
        let comm = (q + 1 <= n).then(|| {
            let c = self.extension.commutator(phi.clone(), self.dbar_of(&phi, dbar_phi));
            FieldSamples::on_volume(&self.shell, c.as_ref())
        });
        let (k0, k01) = (self.omega0(), self.omega01());
        Ok(Box::new(move |z: &CPoint| {
            let rule = self.polar(Region::U, z)?;
            let samples = FieldSamples::on_volume(&rule, ephi.as_ref());
            let vol = integrate_volume_samples(&rule, &k0, &samples, z, q - 1)?;
            match &comm {
                Some(s) => Ok(vol.add(&integrate_volume_samples(&self.shell, &k01, s, z, q - 1)?)),
                None => Ok(vol),
            }
        }))
    }

    /// Both expressions of `H_0`: `int_{bD} Omega^1 phi - int_{U \ D} Omega^1 ^ E dbar phi` and
    /// `int_{U \ D} Omega^1 ^ [dbar, E] phi`.
    pub fn h0_operator<'a>(
        &'a self,
        phi: Arc<dyn FormField>,
        dbar_phi: Option<Arc<dyn FormField>>,
    ) -> Result<Box<dyn Fn(&CPoint) -> Result<(Integral, Integral)> + Send + Sync + 'a>> {
        if phi.q() != 0 || phi.n() != self.dom.n() {
            return Err(Error::Degree { kernel: "H0", q: phi.q(), n: self.dom.n() });
        }
        let dphi = self.dbar_of(&phi, dbar_phi);
        let bnd = FieldSamples::on_boundary(&self.boundary, phi.as_ref());
        let ext_dbar = FieldSamples::on_volume(&self.shell, self.extension.extend(dphi.clone()).as_ref());
        let comm = FieldSamples::on_volume(&self.shell, self.extension.commutator(phi, dphi).as_ref());
        let k1 = self.omega1();
        Ok(Box::new(move |z: &CPoint| {
            let a = integrate_boundary_samples(&self.boundary, &k1, &bnd, z, 0)?
                .sub(&integrate_volume_samples(&self.shell, &k1, &ext_dbar, z, 0)?);
            let b = integrate_volume_samples(&self.shell, &k1, &comm, z, 0)?;
            Ok((a, b))
        }))
    }

    /// Operator `tag` of degree `q` applied to `phi`.
    pub fn operator<'a>(
        &'a self,
        tag: OperatorTag,
        q: usize,
        phi: Arc<dyn FormField>,
        dbar_phi: Option<Arc<dyn FormField>>,
    ) -> Result<Evaluator<'a>> {
        match tag {
            OperatorTag::T => self.t_operator(q, phi),
            OperatorTag::H => self.h_operator(q, phi, dbar_phi),
        }
    }

    /// Checks `r_zeta . (zeta - z) != 0` for `zeta` at the coarse nodes of `U \ D` and `z` at
    /// the probes.
    ///
    /// A sampled estimate of the same condition over `U \ D` times the closure runs first; it
    /// finds zeros between nodes by marching along complex tangent lines.
    pub fn convexity_precheck(&self, probes: &[CPoint]) -> Result<()> {
        let r = &self.r_kernel;
        let cfg = SamplerConfig { boundary: 100, interior: 100, collar: 100, diagonal_depth: 8, tangent: 4, seed: 3 };
        let rep = estimate_condition(self.dom.defining_function().as_ref(), &self.dom, ConditionTag::CPlus, &cfg)?;
        if !rep.holds() {
            let value = r.grad(&rep.witness_zeta).pair(&(rep.witness_zeta - rep.witness_z)).norm();
            return Err(Error::ConvexityPrecheck {
                value,
                zeta: rep.witness_zeta.to_string(),
                z: rep.witness_z.to_string(),
            });
        }
        let scale = self.dom.diameter();
        let nodes: Vec<(CPoint, CPoint)> = self.shell.coarse().iter().map(|v| (v.zeta, r.grad(&v.zeta))).collect();
        let mean_grad = nodes.iter().map(|(_, g)| g.norm()).sum::<f64>() / nodes.len().max(1) as f64;
        let tol = 1e-8 * mean_grad * scale;
        for z in probes {
            for (zeta, g) in &nodes {
                let v = g.pair(&(*zeta - *z)).norm();
                if !(v > tol) {
                    return Err(Error::ConvexityPrecheck { value: v, zeta: zeta.to_string(), z: z.to_string() });
                }
            }
        }
        Ok(())
    }
}

/// `dbar dbar phi = 0`, used as the data of the next operator in residuals.
pub(crate) fn zero_next(phi: &dyn FormField) -> Arc<dyn FormField> {
    Arc::new(ZeroField { n: phi.n(), q: phi.q() + 2 })
}
