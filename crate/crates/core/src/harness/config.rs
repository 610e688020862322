use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::measures::{ProfileSpec, TestFunction, DEFAULT_BLOCK_EPS};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    HydroExclusion,
    HydroZr,
    PottsProfile,
    Front,
    Flux,
    Coupling,
    Stationarity,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::HydroExclusion => "hydro-exclusion",
            Self::HydroZr => "hydro-zr",
            Self::PottsProfile => "potts-profile",
            Self::Front => "front",
            Self::Flux => "flux",
            Self::Coupling => "coupling",
            Self::Stationarity => "stationarity",
        }
    }

    pub fn is_hydro(self) -> bool {
        matches!(self, Self::HydroExclusion | Self::HydroZr | Self::PottsProfile)
    }
}

/// Fields paired against a PDE solution in the hydrodynamic experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Observable {
    /// Exclusion `ξ` against `ζ`.
    Xi,
    /// Dissipative `η` on the negative half-line against `ρ`.
    Eta,
    /// Full-line increments against the full-line `ρ`.
    Full,
    /// Rescaled interface `(f(x) - f(0))/N` against `λ`.
    Interface,
}

impl Observable {
    pub fn name(self) -> &'static str {
        match self {
            Self::Xi => "xi",
            Self::Eta => "eta",
            Self::Full => "full",
            Self::Interface => "interface",
        }
    }
}

/// Per-observable test functions replacing the defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DictionaryConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<Vec<TestFunction>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<TestFunction>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full: Option<Vec<TestFunction>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interface: Option<Vec<TestFunction>>,
}

/// One experiment, read from a TOML file. Every field except `kind` has a default.
///
/// ```toml
/// kind = "hydro-exclusion"
/// N = [64, 128, 256]
/// T = 0.5
/// replicas = 20
/// seed = 1
///
/// [rho0]
/// kind = "constant"
/// params = [0.5]
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Scaling parameters, strictly increasing.
    #[serde(rename = "N", default = "default_n")]
    pub n: Vec<u32>,
    /// Macroscopic horizon.
    #[serde(rename = "T", default = "default_t")]
    pub t: f64,
    #[serde(default = "default_replicas")]
    pub replicas: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Boundary rate coefficient.
    #[serde(default = "default_rb")]
    pub rb: f64,
    /// Zero-range initial density on the negative half-line.
    #[serde(default = "default_profile", alias = "profile")]
    pub rho0: ProfileSpec,
    /// Exclusion initial density on the positive half-line.
    #[serde(default = "default_profile")]
    pub zeta0: ProfileSpec,
    /// Observation times; defaults to `T/2, T`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    /// PDE spacing.
    #[serde(default = "default_du")]
    pub du: f64,
    /// Radius outside of which the dictionary functions vanish.
    #[serde(default = "default_radius")]
    pub support_radius: f64,
    /// Half-width of the truncated lattices in macroscopic units;
    /// defaults to `4 (sqrt(T) + support_radius)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observables: Option<Vec<Observable>>,
    #[serde(default)]
    pub dictionary: DictionaryConfig,
    /// Block width for coarse-grained densities.
    #[serde(default = "default_eps")]
    pub block_eps: f64,
    /// Declared distance tolerance for the hydrodynamic verdicts.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Coupling experiment: Bernoulli densities of the lower and upper exclusion initials.
    #[serde(default = "default_coupling_low")]
    pub coupling_low: f64,
    #[serde(default = "default_coupling_high")]
    pub coupling_high: f64,
    /// Stationarity experiment: parameter of the product measure.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn default_n() -> Vec<u32> {
    vec![64, 128, 256]
}
fn default_t() -> f64 {
    0.5
}
fn default_replicas() -> usize {
    20
}
fn default_seed() -> u64 {
    1
}
fn default_rb() -> f64 {
    1.0
}
fn default_profile() -> ProfileSpec {
    ProfileSpec::constant(0.5)
}
fn default_du() -> f64 {
    1.0 / 200.0
}
fn default_radius() -> f64 {
    1.0
}
fn default_eps() -> f64 {
    DEFAULT_BLOCK_EPS
}
fn default_tolerance() -> f64 {
    0.08
}
fn default_coupling_low() -> f64 {
    0.3
}
fn default_coupling_high() -> f64 {
    0.7
}
fn default_alpha() -> f64 {
    1.0
}

impl ExperimentConfig {
    /// Config of the given kind with every other field at its default.
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            kind,
            n: default_n(),
            t: default_t(),
            replicas: default_replicas(),
            seed: default_seed(),
            rb: default_rb(),
            rho0: default_profile(),
            zeta0: default_profile(),
            times: None,
            du: default_du(),
            support_radius: default_radius(),
            domain: None,
            observables: None,
            dictionary: DictionaryConfig::default(),
            block_eps: default_eps(),
            tolerance: default_tolerance(),
            coupling_low: default_coupling_low(),
            coupling_high: default_coupling_high(),
            alpha: default_alpha(),
            workers: None,
            out: None,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads and validates a config file; table profiles given by path are
    /// loaded relative to the file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_toml_str(&text)?;
        let base = path.parent();
        cfg.rho0 = cfg.rho0.resolve(base)?;
        cfg.zeta0 = cfg.zeta0.resolve(base)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n.is_empty() || self.n.contains(&0) {
            return Err(Error::Config("N list must be nonempty and positive".into()));
        }
        if self.n.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config(format!("N list must be strictly increasing, got {:?}", self.n)));
        }
        if self.replicas == 0 {
            return Err(Error::Config("replica count must be at least 1".into()));
        }
        if !(self.t > 0.0) || !self.t.is_finite() {
            return Err(Error::Config(format!("T must be positive, got {}", self.t)));
        }
        if !(self.rb >= 0.0) || !self.rb.is_finite() {
            return Err(Error::Config(format!("rb must be nonnegative, got {}", self.rb)));
        }
        if !(self.du > 0.0) || !(self.support_radius > 0.0) || !(self.block_eps > 0.0) {
            return Err(Error::Config("du, support_radius and block_eps must be positive".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Config("tolerance must be positive".into()));
        }
        if let Some(times) = &self.times {
            if times.iter().any(|&s| !(0.0..=self.t).contains(&s)) {
                return Err(Error::Config(format!("observation times must lie in [0, T], got {times:?}")));
            }
        }
        if !(0.0..=1.0).contains(&self.coupling_low) || !(self.coupling_low..=1.0).contains(&self.coupling_high) {
            return Err(Error::Config("coupling densities must satisfy 0 <= low <= high <= 1".into()));
        }
        if !(self.alpha >= 0.0) {
            return Err(Error::Config("alpha must be nonnegative".into()));
        }
        let l = self.domain_half_width();
        self.rho0.validate().and_then(|_| self.rho0.validate_density(-l, 0.0))?;
        self.zeta0.validate().and_then(|_| self.zeta0.validate_exclusion(0.0, l))?;
        if self.kind == ExperimentKind::PottsProfile && self.observables().contains(&Observable::Xi) {
            return Err(Error::Config("potts-profile has no exclusion observable".into()));
        }
        Ok(())
    }

    /// Observation schedule.
    pub fn schedule(&self) -> Vec<f64> {
        self.times.clone().unwrap_or_else(|| vec![self.t / 2.0, self.t])
    }

    /// Truncation half-width `L`, a multiple of `du`.
    pub fn domain_half_width(&self) -> f64 {
        let raw = self.domain.unwrap_or(4.0 * (self.t.sqrt() + self.support_radius));
        (raw / self.du - 1e-9).ceil() * self.du
    }

    pub fn observables(&self) -> Vec<Observable> {
        if let Some(o) = &self.observables {
            return o.clone();
        }
        match self.kind {
            ExperimentKind::HydroExclusion => vec![Observable::Xi],
            ExperimentKind::HydroZr => vec![Observable::Eta, Observable::Full],
            ExperimentKind::PottsProfile => vec![Observable::Interface],
            _ => Vec::new(),
        }
    }

    /// Hex SHA-256 of the canonical serialisation.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serialises");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}
