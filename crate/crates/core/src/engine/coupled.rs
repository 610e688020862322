use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::indexed_set::IndexedSet;
use super::rates::{build_event_table, g, Channel};
use super::trajectory::{checked_schedule, observe, EdgeActivity, EventCounts, Observables, Trajectory};
use crate::lattice::{CoupledConfig, ExclusionConfig, IncrementConfig};
use crate::{Error, Result};

/// Parameters of a single run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunParams {
    pub n: u32,
    pub t_max: f64,
    /// Boundary rate coefficient `r_b`.
    pub rb: f64,
    pub schedule: Vec<f64>,
}

impl RunParams {
    pub fn new(n: u32, t_max: f64, rb: f64, schedule: Vec<f64>) -> Self {
        Self { n, t_max, rb, schedule }
    }
}

/// Gillespie realisation of the coupled generator with locally updated channels.
///
/// Every bulk channel has rate `N^2/2`, so the active ones are kept in an
/// [`IndexedSet`] and sampled uniformly. Channel ids: dissipative site index `i`
/// and direction `d` (0 left, 1 right) map to `2i + d`; exclusion site index `j`
/// maps to `2 nz + 2j + d` where `nz` is the dissipative window length.
#[derive(Clone, Debug)]
pub struct CoupledProcess {
    lo: i64,
    eta: Vec<u32>,
    occ: Vec<bool>,
    crossings: u64,
    rb: f64,
    speed: f64,
    set: IndexedSet,
    counts: EventCounts,
    edge: EdgeActivity,
}

impl CoupledProcess {
    pub fn new(config: &CoupledConfig, rb: f64, n: u32) -> Result<Self> {
        if !(rb >= 0.0) || !rb.is_finite() {
            return Err(Error::Precondition(format!("boundary rate must be finite and nonnegative, got {rb}")));
        }
        if n == 0 {
            return Err(Error::Precondition("scaling parameter N must be positive".into()));
        }
        let mut p = Self {
            lo: config.eta().lo(),
            eta: config.eta().counts().to_vec(),
            occ: config.xi().occupancy().to_vec(),
            crossings: config.crossings(),
            rb,
            speed: (n as f64) * (n as f64),
            set: IndexedSet::default(),
            counts: EventCounts::default(),
            edge: EdgeActivity::default(),
        };
        p.rebuild();
        Ok(p)
    }

    fn nz(&self) -> usize {
        self.eta.len()
    }

    fn ex_base(&self) -> u32 {
        2 * self.nz() as u32
    }

    fn rebuild(&mut self) {
        self.set = IndexedSet::with_capacity(2 * (self.nz() + self.occ.len()));
        for i in 0..self.nz() {
            self.refresh_zr(i);
        }
        for j in 0..self.occ.len() {
            self.refresh_ex(j);
        }
    }

    fn refresh_zr(&mut self, i: usize) {
        let full = self.eta[i] > 0;
        let x = self.lo + i as i64;
        self.set.set(2 * i as u32, full && i > 0);
        self.set.set(2 * i as u32 + 1, full && x < 0);
    }

    fn refresh_ex(&mut self, j: usize) {
        let base = self.ex_base() + 2 * j as u32;
        let here = self.occ[j];
        let left = here && j > 0 && !self.occ[j - 1];
        let right = here && j + 1 < self.occ.len() && !self.occ[j + 1];
        self.set.set(base, left);
        self.set.set(base + 1, right);
    }

    fn refresh_ex_around(&mut self, j: usize) {
        for k in j.saturating_sub(1)..=(j + 1).min(self.occ.len() - 1) {
            self.refresh_ex(k);
        }
    }

    fn boundary_rate(&self) -> f64 {
        self.rb * g(*self.eta.last().expect("window contains the origin"))
    }

    /// Total jump rate in microscopic time units (without the `N^2` factor).
    pub fn base_rate(&self) -> f64 {
        0.5 * self.set.len() as f64 + self.boundary_rate()
    }

    /// `g(η(0))`.
    pub fn origin_activity(&self) -> f64 {
        g(*self.eta.last().expect("window contains the origin"))
    }

    pub fn crossings(&self) -> u64 {
        self.crossings
    }

    pub fn counts(&self) -> EventCounts {
        self.counts
    }

    pub fn edge(&self) -> EdgeActivity {
        self.edge
    }

    pub fn config(&self) -> CoupledConfig {
        CoupledConfig::new(IncrementConfig::new(self.lo, self.eta.clone()), ExclusionConfig::new(self.occ.clone()))
            .expect("window ends at the origin")
            .with_crossings(self.crossings)
    }

    fn channel_of(&self, id: u32) -> Channel {
        let base = self.ex_base();
        if id < base {
            let i = (id / 2) as i64;
            let from = self.lo + i;
            let to = if id % 2 == 0 { from - 1 } else { from + 1 };
            Channel::ZeroRange { from, to }
        } else {
            let j = ((id - base) / 2) as usize;
            let from = j + 1;
            let to = if (id - base) % 2 == 0 { from - 1 } else { from + 1 };
            Channel::Exclusion { from, to }
        }
    }

    /// Active channels in a canonical order.
    pub fn active_channels(&self) -> Vec<Channel> {
        let mut out: Vec<Channel> = self.set.iter().map(|id| self.channel_of(id)).collect();
        if self.boundary_rate() > 0.0 {
            out.push(Channel::Boundary);
        }
        out.sort();
        out
    }

    /// Draws the next channel and its waiting time in macroscopic units, or
    /// `None` in an absorbing state.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<(Channel, f64)> {
        let rate = self.base_rate();
        if rate <= 0.0 {
            return None;
        }
        let e: f64 = Exp1.sample(rng);
        let dt = e / (self.speed * rate);
        let u = rng.random::<f64>() * rate;
        let b = self.boundary_rate();
        let ch = if u < b {
            Channel::Boundary
        } else {
            let k = (((u - b) / 0.5) as usize).min(self.set.len() - 1);
            self.channel_of(self.set.get(k))
        };
        Some((ch, dt))
    }

    /// Applies one move. Fails if the channel is not active.
    pub fn fire(&mut self, ch: Channel) -> Result<()> {
        match ch {
            Channel::ZeroRange { from, to } => {
                let i = (from - self.lo) as usize;
                let id = 2 * i as u32 + u32::from(to > from);
                if (to - from).abs() != 1 || from < self.lo || from > 0 || !self.set.contains(id) {
                    return Err(Error::Precondition(format!("{ch:?} is not active")));
                }
                let k = (to - self.lo) as usize;
                self.eta[i] -= 1;
                self.eta[k] += 1;
                self.refresh_zr(i);
                self.refresh_zr(k);
                self.counts.zero_range += 1;
                if i == 0 || k == 0 {
                    self.edge.left += 1;
                }
            }
            Channel::Exclusion { from, to } => {
                if from == 0 || from > self.occ.len() || (to as i64 - from as i64).abs() != 1 {
                    return Err(Error::Precondition(format!("{ch:?} is not active")));
                }
                let j = from - 1;
                let id = self.ex_base() + 2 * j as u32 + u32::from(to > from);
                if !self.set.contains(id) {
                    return Err(Error::Precondition(format!("{ch:?} is not active")));
                }
                let k = to - 1;
                self.occ[j] = false;
                self.occ[k] = true;
                self.refresh_ex_around(j);
                self.refresh_ex_around(k);
                self.counts.exclusion += 1;
                let last = self.occ.len() - 1;
                if j == last || k == last {
                    self.edge.right += 1;
                }
            }
            Channel::Boundary => {
                if self.boundary_rate() <= 0.0 {
                    return Err(Error::Precondition("boundary channel is not active".into()));
                }
                let i = self.nz() - 1;
                self.eta[i] -= 1;
                self.crossings += 1;
                let old = self.occ.len();
                for j in 0..old {
                    let base = self.ex_base() + 2 * j as u32;
                    self.set.remove(base);
                    self.set.remove(base + 1);
                }
                self.occ.insert(0, false);
                self.set.grow(2 * (self.nz() + self.occ.len()));
                self.refresh_zr(i);
                for j in 0..self.occ.len() {
                    self.refresh_ex(j);
                }
                self.counts.boundary += 1;
            }
        }
        Ok(())
    }
}

/// One transition of the coupled chain from `c`, using the full rate table.
/// Returns the new state, the move and the waiting time in macroscopic units.
pub fn step<R: Rng + ?Sized>(c: &CoupledConfig, rb: f64, n: u32, rng: &mut R) -> Result<(CoupledConfig, Channel, f64)> {
    let table = build_event_table(c, rb, n);
    let total = table.total();
    if total <= 0.0 {
        return Err(Error::Precondition("absorbing state: total rate is zero".into()));
    }
    let e: f64 = Exp1.sample(rng);
    let dt = e / total;
    let mut u = rng.random::<f64>() * total;
    let mut chosen = table.channels.last().expect("nonempty").0;
    for &(ch, r) in &table.channels {
        if u < r {
            chosen = ch;
            break;
        }
        u -= r;
    }
    let mut p = CoupledProcess::new(c, rb, n)?;
    p.fire(chosen)?;
    Ok((p.config(), chosen, dt))
}

/// Runs the coupled process from `initial` up to `params.t_max`, recording the
/// observables at every scheduled time.
pub fn run<R: Rng + ?Sized>(
    initial: &CoupledConfig,
    params: &RunParams,
    observables: &Observables,
    rng: &mut R,
) -> Result<Trajectory> {
    let schedule = checked_schedule(&params.schedule, params.t_max)?;
    let mut p = CoupledProcess::new(initial, params.rb, params.n)?;
    let mut snapshots = Vec::with_capacity(schedule.len());
    let mut t = 0.0;
    let mut integral = 0.0;
    let mut next = 0;
    let ledger = initial.ledger();
    let right = initial.xi().particle_count();
    loop {
        let drawn = p.draw(rng);
        let t_next = drawn.map_or(f64::INFINITY, |(_, dt)| t + dt);
        while next < schedule.len() && schedule[next] < t_next {
            let ts = schedule[next];
            let at = integral + p.origin_activity() * (ts - t);
            let snap = observe(&p.config(), ts, at, params.n, observables)?;
            debug_assert_eq!(snap.left_mass + snap.crossings, ledger);
            debug_assert_eq!(snap.right_count as usize, right);
            snapshots.push(snap);
            next += 1;
        }
        if t_next > params.t_max {
            break;
        }
        let (ch, dt) = drawn.expect("finite time implies a move");
        integral += p.origin_activity() * dt;
        t = t_next;
        p.fire(ch)?;
    }
    let mut traj = Trajectory {
        n: params.n,
        schedule,
        snapshots,
        counts: p.counts(),
        edge: p.edge(),
        warnings: Vec::new(),
    };
    traj.finish_warnings();
    Ok(traj)
}

/// Zero-range on `[lo, 0]` with the bond to the positive side removed.
pub fn run_reflected_zr<R: Rng + ?Sized>(
    initial: &IncrementConfig,
    n: u32,
    t_max: f64,
    schedule: &[f64],
    observables: &Observables,
    rng: &mut R,
) -> Result<Trajectory> {
    let c = CoupledConfig::new(initial.clone(), ExclusionConfig::empty(0))?;
    run(&c, &RunParams::new(n, t_max, 0.0, schedule.to_vec()), observables, rng)
}
