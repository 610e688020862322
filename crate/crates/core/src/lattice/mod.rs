//! Configuration types for the three equivalent pictures of the model and the
//! exact transforms between them.
//!
//! * [`SurfaceConfig`]: the Potts interface, a nondecreasing height function
//!   `f` on a finite window of columns.
//! * [`IncrementConfig`]: zero-range occupation numbers `η(x) = f(x) - f(x-1)`.
//! * [`ExclusionConfig`]: exclusion occupancies on `[1, L]`, related to the
//!   positive-side increments by the Kipnis gap map.
//! * [`CoupledConfig`]: dissipative zero-range on `[lo, 0]`, exclusion on the
//!   positive side and the number of particles that crossed the origin.

mod flips;
mod kipnis;
mod text;

pub(crate) use flips::{can_lower, raise_spin};
pub use flips::{admissible_zr_jumps, allowed_flips, apply_flip, apply_zr_jump, flip_to_zr_jump, Flip, Spin};
pub use kipnis::{kipnis_forward, kipnis_inverse, trailing_holes};
pub use text::LineFormat;

use crate::{Error, Result};

/// A nearest-neighbour zero-range particle jump `from -> to` on the full line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZrJump {
    pub from: i64,
    pub to: i64,
}

impl ZrJump {
    pub fn new(from: i64, to: i64) -> Self {
        Self { from, to }
    }
}

/// Ordering constants of the Potts Hamiltonian, `ι(-1) > ι(0) = ι(1) > 0`.
///
/// Only the ordering matters: it is what forbids the flip of the origin column
/// to `-1`, which the flip rule table already encodes. No rate depends on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PottsWeights {
    pub iota_minus: f64,
    pub iota_zero: f64,
    pub iota_plus: f64,
}

impl PottsWeights {
    pub fn new(iota_minus: f64, iota_zero: f64, iota_plus: f64) -> Result<Self> {
        let ok = iota_zero > 0.0 && iota_zero == iota_plus && iota_minus > iota_zero;
        if !ok {
            return Err(Error::Validation(format!(
                "Potts weights must satisfy iota(-1) > iota(0) = iota(1) > 0, got ({iota_minus}, {iota_zero}, {iota_plus})"
            )));
        }
        Ok(Self { iota_minus, iota_zero, iota_plus })
    }
}

impl Default for PottsWeights {
    fn default() -> Self {
        Self { iota_minus: 2.0, iota_zero: 1.0, iota_plus: 1.0 }
    }
}

/// Nondecreasing integer height function on the column window `[lo, lo + len - 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceConfig {
    lo: i64,
    heights: Vec<i64>,
}

impl SurfaceConfig {
    pub fn new(lo: i64, heights: Vec<i64>) -> Result<Self> {
        if heights.is_empty() {
            return Err(Error::Domain("surface window is empty".into()));
        }
        if let Some(i) = heights.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::Validation(format!(
                "surface is not nondecreasing between columns {} and {}",
                lo + i as i64,
                lo + i as i64 + 1
            )));
        }
        Ok(Self { lo, heights })
    }

    /// Builds `f(x)` for `x` in `[lo, hi]` from a closure, validating monotonicity.
    pub fn from_fn(lo: i64, hi: i64, f: impl Fn(i64) -> i64) -> Result<Self> {
        Self::new(lo, (lo..=hi).map(f).collect())
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.heights.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    pub fn heights(&self) -> &[i64] {
        &self.heights
    }

    pub fn contains(&self, x: i64) -> bool {
        x >= self.lo && x <= self.hi()
    }

    pub fn height(&self, x: i64) -> Option<i64> {
        self.contains(x).then(|| self.heights[(x - self.lo) as usize])
    }

    pub fn origin_height(&self) -> Option<i64> {
        self.height(0)
    }

    /// True when the surface is pinned at the origin, `f(0) = 0`.
    pub fn is_pinned(&self) -> bool {
        self.origin_height() == Some(0)
    }

    pub(crate) fn height_mut(&mut self, x: i64) -> &mut i64 {
        let lo = self.lo;
        &mut self.heights[(x - lo) as usize]
    }

    /// Increments `η(x) = f(x) - f(x-1)` on the window minus its left endpoint.
    pub fn to_increments(&self) -> Result<IncrementConfig> {
        if self.heights.len() < 2 {
            return Err(Error::Domain("surface window needs at least two columns".into()));
        }
        let counts = self
            .heights
            .windows(2)
            .map(|w| u32::try_from(w[1] - w[0]).map_err(|_| Error::Domain("increment overflows u32".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(IncrementConfig { lo: self.lo + 1, counts })
    }

    /// Rebuilds the surface on `[η.lo - 1, η.hi]` with `f(0) = f0`.
    ///
    /// The window of `η` must satisfy `η.lo - 1 <= 0 <= η.hi` so that the
    /// anchoring column belongs to the surface window.
    pub fn from_increments(eta: &IncrementConfig, f0: i64) -> Result<Self> {
        let lo = eta.lo() - 1;
        let hi = eta.hi();
        if lo > 0 || hi < 0 {
            return Err(Error::Domain(format!("surface window [{lo}, {hi}] does not contain the origin")));
        }
        let mut heights = Vec::with_capacity(eta.len() + 1);
        let mut acc = 0i64;
        heights.push(0);
        for &k in eta.counts() {
            acc += k as i64;
            heights.push(acc);
        }
        let shift = f0 - heights[(-lo) as usize];
        heights.iter_mut().for_each(|h| *h += shift);
        Ok(Self { lo, heights })
    }
}

/// Zero-range occupation numbers on `[lo, lo + len - 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IncrementConfig {
    lo: i64,
    counts: Vec<u32>,
}

impl IncrementConfig {
    pub fn new(lo: i64, counts: Vec<u32>) -> Self {
        Self { lo, counts }
    }

    pub fn zeros(lo: i64, hi: i64) -> Self {
        let len = (hi - lo + 1).max(0) as usize;
        Self { lo, counts: vec![0; len] }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Right endpoint; `lo - 1` for an empty window.
    pub fn hi(&self) -> i64 {
        self.lo + self.counts.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub(crate) fn counts_mut(&mut self) -> &mut [u32] {
        &mut self.counts
    }

    pub fn contains(&self, x: i64) -> bool {
        x >= self.lo && x <= self.hi()
    }

    pub fn get(&self, x: i64) -> Option<u32> {
        self.contains(x).then(|| self.counts[(x - self.lo) as usize])
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&k| k as u64).sum()
    }

    /// `(x, η(x))` pairs in increasing order of `x`.
    pub fn sites(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.counts.iter().enumerate().map(move |(i, &k)| (self.lo + i as i64, k))
    }

    /// Restriction to `[lo, hi]` intersected with the window.
    pub fn restrict(&self, lo: i64, hi: i64) -> IncrementConfig {
        let a = lo.max(self.lo);
        let b = hi.min(self.hi());
        if a > b {
            return IncrementConfig::new(a, Vec::new());
        }
        let s = (a - self.lo) as usize;
        let e = (b - self.lo) as usize;
        IncrementConfig::new(a, self.counts[s..=e].to_vec())
    }

    /// Concatenation of two adjacent windows.
    pub fn join(&self, right: &IncrementConfig) -> Result<IncrementConfig> {
        if !self.is_empty() && !right.is_empty() && right.lo != self.hi() + 1 {
            return Err(Error::Domain(format!(
                "windows [{}, {}] and [{}, {}] are not adjacent",
                self.lo,
                self.hi(),
                right.lo,
                right.hi()
            )));
        }
        let lo = if self.is_empty() { right.lo } else { self.lo };
        let mut counts = self.counts.clone();
        counts.extend_from_slice(&right.counts);
        Ok(IncrementConfig::new(lo, counts))
    }
}

/// Exclusion occupancies `ξ(x)` on the box `[1, L]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExclusionConfig {
    occupancy: Vec<bool>,
}

impl ExclusionConfig {
    pub fn new(occupancy: Vec<bool>) -> Self {
        Self { occupancy }
    }

    pub fn empty(len: usize) -> Self {
        Self { occupancy: vec![false; len] }
    }

    /// Box of length `len` occupied exactly at the given (1-based) sites.
    pub fn from_sites(len: usize, sites: &[usize]) -> Result<Self> {
        let mut occupancy = vec![false; len];
        for &x in sites {
            if x == 0 || x > len {
                return Err(Error::Domain(format!("site {x} outside [1, {len}]")));
            }
            occupancy[x - 1] = true;
        }
        Ok(Self { occupancy })
    }

    pub fn len(&self) -> usize {
        self.occupancy.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupancy.is_empty()
    }

    pub fn occupancy(&self) -> &[bool] {
        &self.occupancy
    }

    pub(crate) fn occupancy_mut(&mut self) -> &mut Vec<bool> {
        &mut self.occupancy
    }

    /// `ξ(x)` for 1-based `x`; sites outside the box are empty.
    pub fn occupied(&self, x: usize) -> bool {
        x >= 1 && x <= self.occupancy.len() && self.occupancy[x - 1]
    }

    pub fn particle_count(&self) -> usize {
        self.occupancy.iter().filter(|&&b| b).count()
    }

    /// 1-based particle positions in increasing order.
    pub fn positions(&self) -> Vec<usize> {
        self.occupancy
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i + 1))
            .collect()
    }

    /// The translation `τξ`: every particle moves one site to the right and a new
    /// empty site appears at 1. The box grows by one site, so no particle is lost.
    pub fn translate(&mut self) {
        self.occupancy.insert(0, false);
    }
}

/// State of the coupled dissipative zero-range / exclusion process.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoupledConfig {
    eta: IncrementConfig,
    xi: ExclusionConfig,
    crossings: u64,
}

impl CoupledConfig {
    /// `eta` must live on a window ending at the origin.
    pub fn new(eta: IncrementConfig, xi: ExclusionConfig) -> Result<Self> {
        if eta.is_empty() || eta.hi() != 0 {
            return Err(Error::Domain(format!(
                "dissipative window must be [lo, 0], got [{}, {}]",
                eta.lo(),
                eta.hi()
            )));
        }
        Ok(Self { eta, xi, crossings: 0 })
    }

    pub fn with_crossings(mut self, crossings: u64) -> Self {
        self.crossings = crossings;
        self
    }

    pub fn eta(&self) -> &IncrementConfig {
        &self.eta
    }

    pub fn xi(&self) -> &ExclusionConfig {
        &self.xi
    }

    pub fn crossings(&self) -> u64 {
        self.crossings
    }

    /// Left particles plus crossings; constant along every path.
    pub fn ledger(&self) -> u64 {
        self.eta.total() + self.crossings
    }

    /// Splits full-line increments on `[lo, hi]` (with `lo <= 0 < hi`) into the
    /// coupled picture. Sites `1..hi-1` become gaps in front of the exclusion
    /// particles and site `hi` becomes the run of holes behind the last particle.
    pub fn from_full_increments(eta: &IncrementConfig) -> Result<Self> {
        if eta.lo() > 0 || eta.hi() < 1 {
            return Err(Error::Domain(format!(
                "full-line window [{}, {}] must contain 0 and 1",
                eta.lo(),
                eta.hi()
            )));
        }
        let left = eta.restrict(eta.lo(), 0);
        let gaps = eta.restrict(1, eta.hi() - 1);
        let tail = eta.get(eta.hi()).unwrap_or(0) as usize;
        let len = gaps.total() as usize + gaps.len() + tail;
        let xi = kipnis_forward(&gaps, len)?;
        Self::new(left, xi)
    }

    /// Inverse of [`CoupledConfig::from_full_increments`]: full-line increments on
    /// `[lo, K + 1]` where `K` is the number of exclusion particles.
    pub fn to_full_increments(&self) -> IncrementConfig {
        let mut right = kipnis_inverse(&self.xi).counts().to_vec();
        right.push(trailing_holes(&self.xi) as u32);
        let mut counts = self.eta.counts().to_vec();
        counts.extend(right);
        IncrementConfig::new(self.eta.lo(), counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_surface_has_zero_increments() {
        let f = SurfaceConfig::from_fn(-3, 3, |_| 0).unwrap();
        let eta = f.to_increments().unwrap();
        assert_eq!(eta.lo(), -2);
        assert_eq!(eta.hi(), 3);
        assert!(eta.counts().iter().all(|&k| k == 0));
    }

    #[test]
    fn staircase_has_unit_increments() {
        let f = SurfaceConfig::from_fn(-3, 3, |x| x).unwrap();
        assert!(f.to_increments().unwrap().counts().iter().all(|&k| k == 1));
    }

    #[test]
    fn difference_formula() {
        let f = SurfaceConfig::new(-2, vec![-1, -1, 0, 2, 3]).unwrap();
        let eta = f.to_increments().unwrap();
        assert_eq!(eta.lo(), -1);
        assert_eq!(eta.counts(), &[0, 1, 2, 1]);
    }

    #[test]
    fn single_column_is_too_small() {
        let f = SurfaceConfig::new(0, vec![4]).unwrap();
        assert!(matches!(f.to_increments(), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_decreasing_heights() {
        assert!(SurfaceConfig::new(0, vec![0, 2, 1]).is_err());
    }

    #[test]
    fn cumulative_sum_with_anchor() {
        let eta = IncrementConfig::new(-1, vec![1, 1, 1, 1]);
        let f = SurfaceConfig::from_increments(&eta, 5).unwrap();
        assert_eq!(f.lo(), -2);
        assert_eq!(f.heights(), &[3, 4, 5, 6, 7]);
        let flat = SurfaceConfig::from_increments(&IncrementConfig::zeros(-2, 3), 0).unwrap();
        assert!(flat.heights().iter().all(|&h| h == 0));
    }

    #[test]
    fn potts_weights_ordering() {
        assert!(PottsWeights::new(2.0, 1.0, 1.0).is_ok());
        assert!(PottsWeights::new(1.0, 1.0, 1.0).is_err());
        assert!(PottsWeights::new(2.0, 1.0, 1.5).is_err());
        assert!(PottsWeights::new(2.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn full_increments_round_trip() {
        let eta = IncrementConfig::new(-2, vec![1, 0, 2, 3, 0, 1, 2]);
        let c = CoupledConfig::from_full_increments(&eta).unwrap();
        assert_eq!(c.eta().counts(), &[1, 0, 2]);
        // gaps (3, 0, 1) then two trailing holes
        assert_eq!(c.xi().positions(), vec![4, 5, 7]);
        assert_eq!(c.xi().len(), 9);
        assert_eq!(c.to_full_increments(), eta);
    }

    #[test]
    fn translation_inserts_hole_at_one() {
        let mut xi = ExclusionConfig::new(vec![true, false]);
        xi.translate();
        assert_eq!(xi.occupancy(), &[false, true, false]);
        assert_eq!(xi.particle_count(), 1);
    }
}
