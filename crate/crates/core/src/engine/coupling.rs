use std::ops::RangeInclusive;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use super::indexed_set::IndexedSet;
use super::rates::g;
use crate::lattice::{CoupledConfig, IncrementConfig};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingMode {
    /// One clock per ordered bond, applied to every system that can use it.
    Basic,
    /// One clock per unordered bond exchanging the contents of both sites in both systems.
    Stirring,
}

/// Sets `Λ` (initial sites) and `Γ` (observation sites) for the functional
/// `𝓚 = #{x ∈ Γ : ξ_t(x) = 1 and the particle at x started in Λ}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingSets {
    pub lambda: RangeInclusive<usize>,
    pub gamma: RangeInclusive<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CouplingReport {
    pub mode: Option<CouplingMode>,
    pub events: u64,
    /// Events after which some site had `ξ(x) = 1` and `ξ̄(x) = 0`.
    pub order_violations: u64,
    pub max_violating_sites: u64,
    /// Sites occupied in both systems at the end.
    pub attached: u64,
    /// `(𝓚(ξ), 𝓚(ξ̄))` at the end, stirring mode only.
    pub k_final: Option<(u64, u64)>,
    /// Events after which `𝓚(ξ) > 𝓚(ξ̄)`, stirring mode only.
    pub k_violations: u64,
    pub crossings: u64,
}

struct Pair {
    lo: i64,
    eta: Vec<u32>,
    a: Vec<bool>,
    b: Vec<bool>,
    origin: Vec<Option<u32>>,
    crossings: u64,
    mode: CouplingMode,
    set: IndexedSet,
    violating: u64,
    k: (u64, u64),
    sets: Option<CrossingSets>,
}

impl Pair {
    fn nz(&self) -> usize {
        self.eta.len()
    }

    fn ex_base(&self) -> u32 {
        2 * self.nz() as u32
    }

    fn refresh_zr(&mut self, i: usize) {
        let full = self.eta[i] > 0;
        let x = self.lo + i as i64;
        self.set.set(2 * i as u32, full && i > 0);
        self.set.set(2 * i as u32 + 1, full && x < 0);
    }

    fn refresh_ex(&mut self, j: usize) {
        let base = self.ex_base() + 2 * j as u32;
        let len = self.a.len();
        match self.mode {
            CouplingMode::Basic => {
                let can = |o: &[bool], k: Option<usize>| o[j] && k.is_some_and(|k| k < len && !o[k]);
                let left = j.checked_sub(1);
                let right = Some(j + 1);
                self.set.set(base, can(&self.a, left) || can(&self.b, left));
                self.set.set(base + 1, can(&self.a, right) || can(&self.b, right));
            }
            CouplingMode::Stirring => {
                let active = j + 1 < len && (self.a[j] || self.a[j + 1] || self.b[j] || self.b[j + 1]);
                self.set.set(base, active);
            }
        }
    }

    fn refresh_ex_around(&mut self, j: usize) {
        for k in j.saturating_sub(1)..=(j + 1).min(self.a.len() - 1) {
            self.refresh_ex(k);
        }
    }

    fn violates(&self, j: usize) -> bool {
        self.a[j] && !self.b[j]
    }

    fn k_site(&self, j: usize) -> (u64, u64) {
        let Some(sets) = &self.sets else { return (0, 0) };
        if !sets.gamma.contains(&(j + 1)) {
            return (0, 0);
        }
        let tagged = self.origin[j].is_some_and(|o| sets.lambda.contains(&(o as usize)));
        (u64::from(tagged && self.a[j]), u64::from(tagged && self.b[j]))
    }

    fn recount(&mut self) {
        self.violating = (0..self.a.len()).filter(|&j| self.violates(j)).count() as u64;
        self.k = (0..self.a.len()).map(|j| self.k_site(j)).fold((0, 0), |acc, v| (acc.0 + v.0, acc.1 + v.1));
    }

    fn rebuild(&mut self) {
        self.set = IndexedSet::with_capacity(2 * (self.nz() + self.a.len()));
        for i in 0..self.nz() {
            self.refresh_zr(i);
        }
        for j in 0..self.a.len() {
            self.refresh_ex(j);
        }
    }

    /// Applies `op` to the exclusion sites `js`, keeping the violation and `𝓚`
    /// counters in sync.
    fn touch(&mut self, js: &[usize], op: impl FnOnce(&mut Self)) {
        for &j in js {
            self.violating -= u64::from(self.violates(j));
            let (ka, kb) = self.k_site(j);
            self.k.0 -= ka;
            self.k.1 -= kb;
        }
        op(self);
        for &j in js {
            self.violating += u64::from(self.violates(j));
            let (ka, kb) = self.k_site(j);
            self.k.0 += ka;
            self.k.1 += kb;
        }
        for &j in js {
            self.refresh_ex_around(j);
        }
    }

    fn fire(&mut self, id: u32) {
        let base = self.ex_base();
        if id < base {
            let i = (id / 2) as usize;
            let k = if id % 2 == 0 { i - 1 } else { i + 1 };
            self.eta[i] -= 1;
            self.eta[k] += 1;
            self.refresh_zr(i);
            self.refresh_zr(k);
            return;
        }
        let j = ((id - base) / 2) as usize;
        match self.mode {
            CouplingMode::Basic => {
                let k = if (id - base) % 2 == 0 { j - 1 } else { j + 1 };
                self.touch(&[j, k], |p| {
                    for o in [&mut p.a, &mut p.b] {
                        if o[j] && !o[k] {
                            o[j] = false;
                            o[k] = true;
                        }
                    }
                });
            }
            CouplingMode::Stirring => {
                self.touch(&[j, j + 1], |p| {
                    p.a.swap(j, j + 1);
                    p.b.swap(j, j + 1);
                    p.origin.swap(j, j + 1);
                });
            }
        }
    }

    fn boundary(&mut self) {
        let i = self.nz() - 1;
        self.eta[i] -= 1;
        self.crossings += 1;
        self.a.insert(0, false);
        self.b.insert(0, false);
        self.origin.insert(0, None);
        self.refresh_zr(i);
        self.rebuild();
        self.recount();
    }
}

/// Runs two coupled processes sharing the dissipative part and the boundary
/// events, with the exclusion parts coupled as in `mode`.
pub fn run_coupled_pair<R: Rng + ?Sized>(
    initial: (&CoupledConfig, &CoupledConfig),
    mode: CouplingMode,
    rb: f64,
    n: u32,
    t_max: f64,
    sets: Option<CrossingSets>,
    rng: &mut R,
) -> Result<CouplingReport> {
    let (x, y) = initial;
    if x.eta() != y.eta() || x.crossings() != y.crossings() {
        return Err(Error::Precondition("coupled pair must share the dissipative initial configuration".into()));
    }
    if x.xi().len() != y.xi().len() {
        return Err(Error::Precondition("coupled pair must share the exclusion box".into()));
    }
    if !(rb >= 0.0) || !(t_max >= 0.0) {
        return Err(Error::Precondition("boundary rate and horizon must be nonnegative".into()));
    }
    let len = x.xi().len();
    let mut p = Pair {
        lo: x.eta().lo(),
        eta: x.eta().counts().to_vec(),
        a: x.xi().occupancy().to_vec(),
        b: y.xi().occupancy().to_vec(),
        origin: (1..=len as u32).map(Some).collect(),
        crossings: x.crossings(),
        mode,
        set: IndexedSet::default(),
        violating: 0,
        k: (0, 0),
        sets,
    };
    p.rebuild();
    p.recount();
    let speed = (n as f64) * (n as f64);
    let mut report = CouplingReport { mode: Some(mode), ..Default::default() };
    let mut t = 0.0;
    loop {
        let brate = rb * g(*p.eta.last().expect("window contains the origin"));
        let rate = 0.5 * p.set.len() as f64 + brate;
        if rate <= 0.0 {
            break;
        }
        let e: f64 = Exp1.sample(rng);
        t += e / (speed * rate);
        if t > t_max {
            break;
        }
        let u = rng.random::<f64>() * rate;
        if u < brate {
            p.boundary();
        } else {
            let k = (((u - brate) / 0.5) as usize).min(p.set.len() - 1);
            p.fire(p.set.get(k));
        }
        report.events += 1;
        if p.violating > 0 {
            report.order_violations += 1;
        }
        report.max_violating_sites = report.max_violating_sites.max(p.violating);
        if p.k.0 > p.k.1 {
            report.k_violations += 1;
        }
    }
    report.attached = p.a.iter().zip(&p.b).filter(|(u, v)| **u && **v).count() as u64;
    report.crossings = p.crossings;
    if mode == CouplingMode::Stirring && p.sets.is_some() {
        report.k_final = Some(p.k);
    }
    Ok(report)
}

/// Outcome of the dissipative versus reflected zero-range comparison.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub events: u64,
    /// Events after which `η(x) > η̄(x)` somewhere.
    pub order_violations: u64,
    pub final_dissipative: u64,
    pub final_reflected: u64,
}

/// Basic coupling of the dissipative zero-range `η` (losing particles at the
/// origin at rate `r_b g(η(0))`) with the reflected one `η̄` on the same window.
pub fn run_zr_comparison<R: Rng + ?Sized>(
    eta: &IncrementConfig,
    eta_bar: &IncrementConfig,
    rb: f64,
    n: u32,
    t_max: f64,
    rng: &mut R,
) -> Result<ComparisonReport> {
    if eta.lo() != eta_bar.lo() || eta.hi() != 0 || eta_bar.hi() != 0 {
        return Err(Error::Precondition("both configurations must live on the same window [lo, 0]".into()));
    }
    let mut a = eta.counts().to_vec();
    let mut b = eta_bar.counts().to_vec();
    let m = a.len();
    let speed = (n as f64) * (n as f64);
    // bond clock `2i + d` rings for site i toward i-1 (d = 0) or i+1 (d = 1)
    let mut set = IndexedSet::with_capacity(2 * m);
    let refresh = |set: &mut IndexedSet, a: &[u32], b: &[u32], i: usize| {
        let any = a[i] > 0 || b[i] > 0;
        set.set(2 * i as u32, any && i > 0);
        set.set(2 * i as u32 + 1, any && i + 1 < m);
    };
    for i in 0..m {
        refresh(&mut set, &a, &b, i);
    }
    let mut violating = a.iter().zip(&b).filter(|(u, v)| u > v).count() as u64;
    let mut report = ComparisonReport::default();
    let mut t = 0.0;
    loop {
        let brate = rb * g(a[m - 1]);
        let rate = 0.5 * set.len() as f64 + brate;
        if rate <= 0.0 {
            break;
        }
        let e: f64 = Exp1.sample(rng);
        t += e / (speed * rate);
        if t > t_max {
            break;
        }
        let u = rng.random::<f64>() * rate;
        let touched: Vec<usize> = if u < brate {
            violating -= u64::from(a[m - 1] > b[m - 1]);
            a[m - 1] -= 1;
            violating += u64::from(a[m - 1] > b[m - 1]);
            vec![m - 1]
        } else {
            let id = set.get((((u - brate) / 0.5) as usize).min(set.len() - 1));
            let i = (id / 2) as usize;
            let k = if id % 2 == 0 { i - 1 } else { i + 1 };
            for s in [i, k] {
                violating -= u64::from(a[s] > b[s]);
            }
            for o in [&mut a, &mut b] {
                if o[i] > 0 {
                    o[i] -= 1;
                    o[k] += 1;
                }
            }
            for s in [i, k] {
                violating += u64::from(a[s] > b[s]);
            }
            vec![i, k]
        };
        for i in touched {
            refresh(&mut set, &a, &b, i);
        }
        report.events += 1;
        if violating > 0 {
            report.order_violations += 1;
        }
    }
    report.final_dissipative = a.iter().map(|&k| k as u64).sum();
    report.final_reflected = b.iter().map(|&k| k as u64).sum();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ExclusionConfig;
    use crate::measures::{rng_for, Stream};

    fn pair(a: Vec<bool>, b: Vec<bool>) -> (CoupledConfig, CoupledConfig) {
        let eta = IncrementConfig::new(-3, vec![1, 2, 0, 1]);
        (
            CoupledConfig::new(eta.clone(), ExclusionConfig::new(a)).unwrap(),
            CoupledConfig::new(eta, ExclusionConfig::new(b)).unwrap(),
        )
    }

    #[test]
    fn mismatched_dissipative_part_is_rejected() {
        let (x, _) = pair(vec![true, false], vec![true, true]);
        let y = CoupledConfig::new(IncrementConfig::zeros(-3, 0), ExclusionConfig::new(vec![true, true])).unwrap();
        let mut rng = rng_for(0, Stream::Dynamics);
        assert!(run_coupled_pair((&x, &y), CouplingMode::Basic, 1.0, 4, 1.0, None, &mut rng).is_err());
    }

    #[test]
    fn ordered_pairs_stay_ordered() {
        let (x, y) = pair(
            vec![true, false, false, true, false, false, true, false],
            vec![true, true, false, true, false, true, true, false],
        );
        for mode in [CouplingMode::Basic, CouplingMode::Stirring] {
            for seed in 0..20 {
                let mut rng = rng_for(seed, Stream::Dynamics);
                let sets = CrossingSets { lambda: 1..=4, gamma: 3..=9 };
                let r = run_coupled_pair((&x, &y), mode, 1.0, 3, 1.0, Some(sets), &mut rng).unwrap();
                assert!(r.events > 0);
                assert_eq!(r.order_violations, 0, "{mode:?} seed {seed}");
                assert_eq!(r.k_violations, 0);
            }
        }
    }

    #[test]
    fn identical_initials_stay_identical() {
        let (x, y) = pair(vec![true, false, true, false], vec![true, false, true, false]);
        let mut rng = rng_for(2, Stream::Dynamics);
        let r = run_coupled_pair((&x, &y), CouplingMode::Basic, 1.0, 3, 2.0, None, &mut rng).unwrap();
        assert_eq!(r.order_violations, 0);
        assert_eq!(r.attached, 2);
    }

    #[test]
    fn dissipative_below_reflected() {
        let eta = IncrementConfig::new(-4, vec![1, 0, 2, 1, 1]);
        for seed in 0..20 {
            let mut rng = rng_for(seed, Stream::Dynamics);
            let r = run_zr_comparison(&eta, &eta, 1.0, 3, 1.0, &mut rng).unwrap();
            assert_eq!(r.order_violations, 0);
            assert_eq!(r.final_reflected, 5);
            assert!(r.final_dissipative <= 5);
        }
    }
}
