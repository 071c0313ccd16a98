//! Experiment configuration (TOML).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{ExprField, FormField};
use crate::geometry::{Domain, DomainSpec, SamplerConfig};
use crate::operators::{ExtensionMode, Resolution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum OperatorKind {
    #[default]
    T,
    H,
    H0,
}

/// Form data: coefficient expressions keyed by multi-index (`"1"`, `"1,2"`, `""`).
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    #[serde(default)]
    pub q: usize,
    #[serde(default)]
    pub coeffs: BTreeMap<String, String>,
    /// Optional closed form of `dbar phi` (degree `q + 1`); finite differences otherwise.
    pub dbar: Option<BTreeMap<String, String>>,
    /// Optional expected solution (degree `q - 1`, or `q` for `H0`), checked at the probes.
    pub exact: Option<BTreeMap<String, String>>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    1e-3
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorConfig {
    #[serde(default)]
    pub tag: OperatorKind,
    /// Defaults to the data degree.
    pub q: Option<usize>,
    #[serde(default)]
    pub extension: ExtensionMode,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionConfig {
    #[serde(default = "default_boundary")]
    pub boundary: usize,
    #[serde(default = "default_volume")]
    pub volume: usize,
    /// Exclusion radius; defaults to `0.8 * diameter / volume`.
    pub epsilon: Option<f64>,
    #[serde(default = "default_h")]
    pub h: f64,
    /// Number of joint refinements (`N -> 2N`, `epsilon -> epsilon / 2`) used by `verify`,
    /// starting from `boundary`/`volume`.
    #[serde(default = "default_levels")]
    pub levels: usize,
}

fn default_boundary() -> usize {
    32
}
fn default_volume() -> usize {
    16
}
fn default_h() -> f64 {
    1e-4
}
fn default_levels() -> usize {
    2
}

impl Default for ResolutionConfig {
    fn default() -> Self {
        ResolutionConfig { boundary: 32, volume: 16, epsilon: None, h: 1e-4, levels: 2 }
    }
}

impl ResolutionConfig {
    pub fn resolution(&self, dom: &Domain) -> Resolution {
        let eps = self.epsilon.unwrap_or(0.8 * dom.diameter() / self.volume as f64);
        Resolution::new(self.boundary, self.volume, eps)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    #[serde(default = "default_probes")]
    pub count: usize,
    pub seed: Option<u64>,
}

fn default_probes() -> usize {
    20
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { count: 20, seed: None }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// Finite-difference steps of the Koppelman check.
    #[serde(default = "default_koppelman_steps")]
    pub koppelman_steps: Vec<f64>,
    #[serde(default = "default_kop_points")]
    pub koppelman_points: usize,
    /// Accepted range of the measured Koppelman order.
    #[serde(default = "default_order_range")]
    pub order_range: [f64; 2],
    /// Residual must stay below `factor * estimate`.
    #[serde(default = "default_factor")]
    pub estimate_factor: f64,
    /// Minimal order of the homotopy residual under joint refinement.
    #[serde(default = "default_min_order")]
    pub min_order: f64,
    /// Operators on the homotopy ladder; defaults to `operator.tag`.
    pub operators: Option<Vec<OperatorKind>>,
}

fn default_koppelman_steps() -> Vec<f64> {
    vec![1e-3, 1e-4]
}
fn default_kop_points() -> usize {
    50
}
fn default_order_range() -> [f64; 2] {
    [1.7, 2.3]
}
fn default_factor() -> f64 {
    5.0
}
fn default_min_order() -> f64 {
    1.0
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            koppelman_steps: default_koppelman_steps(),
            koppelman_points: 50,
            order_range: default_order_range(),
            estimate_factor: 5.0,
            min_order: 1.0,
            operators: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolderConfig {
    /// Data exponents `a`; the solution is measured in `a + 1/2`. `0` is the sup norm.
    #[serde(default = "default_exponents")]
    pub exponents: Vec<f64>,
    /// Powers `s` of the rough family `|z_1 - p|^s dzbar_1`, `p` on the boundary.
    #[serde(default = "default_family")]
    pub family: Vec<f64>,
    #[serde(default = "default_pairs")]
    pub pairs: usize,
    /// Points at which the solution is evaluated.
    #[serde(default = "default_cloud")]
    pub cloud: usize,
    /// Largest accepted ratio between family members.
    #[serde(default = "default_drift")]
    pub max_drift: f64,
}

fn default_exponents() -> Vec<f64> {
    vec![0.0]
}
fn default_family() -> Vec<f64> {
    vec![0.3, 0.5, 0.7]
}
fn default_pairs() -> usize {
    100_000
}
fn default_cloud() -> usize {
    32
}
fn default_drift() -> f64 {
    2.0
}

impl Default for HolderConfig {
    fn default() -> Self {
        HolderConfig {
            exponents: default_exponents(),
            family: default_family(),
            pairs: default_pairs(),
            cloud: default_cloud(),
            max_drift: default_drift(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    pub domain: DomainSpec,
    #[serde(default)]
    pub data: DataConfig,
    #[serde(default)]
    pub operator: OperatorConfig,
    #[serde(default)]
    pub resolution: ResolutionConfig,
    #[serde(default)]
    pub probes: ProbeConfig,
    /// Sampler for the convexity conditions; seeded from `seed` when absent.
    pub conditions: Option<SamplerConfig>,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub holder: HolderConfig,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

fn positive(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Config(format!("{what} must be positive")))
    }
}

impl ExperimentConfig {
    pub fn parse(src: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(src).map_err(|e| Error::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&src)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=crate::geometry::MAX_DIM).contains(&self.n) {
            return Err(Error::Dimension(self.n));
        }
        let r = &self.resolution;
        positive(r.boundary > 0 && r.volume > 0, "resolution.boundary and resolution.volume")?;
        positive(r.h > 0.0, "resolution.h")?;
        positive(r.epsilon.is_none_or(|e| e > 0.0), "resolution.epsilon")?;
        positive(self.probes.count > 0, "probes.count")?;
        Domain::new(self.n, self.domain.clone()).map_err(|e| Error::Config(e.to_string()))?;
        if self.data.q > self.n {
            return Err(Error::Config(format!("data.q = {} exceeds n = {}", self.data.q, self.n)));
        }
        if let Some(q) = self.operator.q {
            if q > self.n {
                return Err(Error::Config(format!("operator.q = {q} exceeds n = {}", self.n)));
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> Result<Domain> {
        Domain::new(self.n, self.domain.clone())
    }

    pub fn operator_q(&self) -> usize {
        self.operator.q.unwrap_or(self.data.q)
    }

    pub fn probe_seed(&self) -> u64 {
        self.probes.seed.unwrap_or(self.seed)
    }

    pub fn sampler(&self) -> SamplerConfig {
        self.conditions.clone().unwrap_or(SamplerConfig { seed: self.seed, ..SamplerConfig::default() })
    }

    pub fn verify_operators(&self) -> Vec<OperatorKind> {
        self.verify.operators.clone().unwrap_or_else(|| vec![self.operator.tag])
    }

    pub fn phi(&self) -> Result<Arc<dyn FormField>> {
        Ok(Arc::new(ExprField::new(self.n, self.data.q, &self.data.coeffs)?))
    }

    pub fn dbar_phi(&self) -> Result<Option<Arc<dyn FormField>>> {
        match &self.data.dbar {
            Some(m) => Ok(Some(Arc::new(ExprField::new(self.n, self.data.q + 1, m)?))),
            None => Ok(None),
        }
    }

    pub fn exact(&self, q: usize) -> Result<Option<ExprField>> {
        self.data.exact.as_ref().map(|m| ExprField::new(self.n, q, m)).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let cfg = ExperimentConfig::parse("n = 2\n[domain]\nkind = \"ball\"\nradius = 1.0\n").unwrap();
        assert_eq!(cfg.resolution.boundary, 32);
        assert_eq!(cfg.probes.count, 20);
        assert_eq!(cfg.sampler().seed, 0);
    }

    #[test]
    fn rejects_bad_values() {
        let bad = "n = 2\n[domain]\nkind = \"ball\"\nradius = 1.0\n[resolution]\nvolume = 0\n";
        assert!(matches!(ExperimentConfig::parse(bad), Err(Error::Config(_))));
        let unknown = "n = 2\nfoo = 1\n[domain]\nkind = \"ball\"\nradius = 1.0\n";
        assert!(matches!(ExperimentConfig::parse(unknown), Err(Error::Config(_))));
        let q = "n = 1\n[domain]\nkind = \"ball\"\nradius = 1.0\n[data]\nq = 2\n";
        assert!(matches!(ExperimentConfig::parse(q), Err(Error::Config(_))));
        let m = "n = 1\n[domain]\nkind = \"power_domain\"\nexponents = [1.0, 2.0]\nlevel = 1.0\n";
        assert!(matches!(ExperimentConfig::parse(m), Err(Error::Config(s)) if s.contains("m > 1")));
    }
}
