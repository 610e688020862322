use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::TestFunction;
use crate::lattice::{ExclusionConfig, IncrementConfig, SurfaceConfig};
use crate::{Error, Result};

/// A configuration seen as a nonnegative field on lattice sites.
pub trait LatticeField {
    /// `(x, value(x))` for every site of the window.
    fn field(&self) -> Vec<(i64, f64)>;
}

impl LatticeField for IncrementConfig {
    fn field(&self) -> Vec<(i64, f64)> {
        self.sites().map(|(x, k)| (x, k as f64)).collect()
    }
}

impl LatticeField for ExclusionConfig {
    fn field(&self) -> Vec<(i64, f64)> {
        self.occupancy().iter().enumerate().map(|(i, &b)| (i as i64 + 1, if b { 1.0 } else { 0.0 })).collect()
    }
}

/// `⟨π^N, G⟩ = N^{-1} Σ_x G(x/N) value(x)`.
pub fn empirical_pairing<C: LatticeField + ?Sized>(config: &C, g: &TestFunction, n: u32) -> f64 {
    let scale = n as f64;
    let (a, b) = g.support();
    config
        .field()
        .into_iter()
        .filter(|&(x, _)| {
            let u = x as f64 / scale;
            u >= a && u <= b
        })
        .map(|(x, v)| g.eval(x as f64 / scale) * v)
        .sum::<f64>()
        / scale
}

/// `N^{-1} Σ_x G(x/N) N^{-1} (f(x) - f(0))`, the rescaled interface seen by `G`.
pub fn interface_pairing(f: &SurfaceConfig, g: &TestFunction, n: u32) -> Result<f64> {
    let f0 = f
        .origin_height()
        .ok_or_else(|| Error::Domain("surface window does not contain the origin".into()))?;
    let scale = n as f64;
    let (a, b) = g.support();
    let sum: f64 = (f.lo()..=f.hi())
        .zip(f.heights())
        .filter(|&(x, _)| {
            let u = x as f64 / scale;
            u >= a && u <= b
        })
        .map(|(x, &h)| g.eval(x as f64 / scale) * (h - f0) as f64)
        .sum();
    Ok(sum / (scale * scale))
}

/// Averages over consecutive blocks of `⌊εN⌋` sites tiling the window; each
/// entry is `(macroscopic block center, mean value)`. A trailing partial block
/// is dropped.
pub fn block_density<C: LatticeField + ?Sized>(config: &C, n: u32, eps: f64) -> Result<Vec<(f64, f64)>> {
    let width = (eps * n as f64).floor();
    if !(width >= 1.0) {
        return Err(Error::Domain(format!("block width eps*N = {} is below one site", eps * n as f64)));
    }
    let width = width as usize;
    let field = config.field();
    Ok(field
        .chunks_exact(width)
        .map(|block| {
            let center = (block[0].0 + block[width - 1].0) as f64 / 2.0 / n as f64;
            let mean = block.iter().map(|&(_, v)| v).sum::<f64>() / width as f64;
            (center, mean)
        })
        .collect())
}

/// Pairings of one configuration with a dictionary, plus optional block densities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalRecord {
    pub n: u32,
    pub pairings: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub block_densities: Vec<(f64, f64)>,
}

impl EmpiricalRecord {
    pub fn of<C: LatticeField + ?Sized>(config: &C, dictionary: &[TestFunction], n: u32) -> Self {
        let pairings = dictionary.iter().map(|g| (g.id.clone(), empirical_pairing(config, g, n))).collect();
        Self { n, pairings, block_densities: Vec::new() }
    }

    pub fn with_blocks<C: LatticeField + ?Sized>(mut self, config: &C, eps: f64) -> Result<Self> {
        self.block_densities = block_density(config, self.n, eps)?;
        Ok(self)
    }
}
