use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::indexed_set::IndexedSet;
use super::trajectory::{checked_schedule, observe, EdgeActivity, EventCounts, Observables, Trajectory};
use crate::lattice::{can_lower, raise_spin, CoupledConfig, Flip, Spin, SurfaceConfig};
use crate::{Error, Result};

/// Zero-temperature flip dynamics of the interface, every allowed flip at rate `N^2/2`.
///
/// Channel ids: column index `c` maps to `2c` (drop) and `2c + 1` (grow).
#[derive(Clone, Debug)]
pub struct PottsProcess {
    surface: SurfaceConfig,
    speed: f64,
    set: IndexedSet,
    counts: EventCounts,
    edge: EdgeActivity,
}

impl PottsProcess {
    pub fn new(initial: &SurfaceConfig, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("scaling parameter N must be positive".into()));
        }
        let mut p = Self {
            surface: initial.clone(),
            speed: (n as f64) * (n as f64),
            set: IndexedSet::with_capacity(2 * initial.len()),
            counts: EventCounts::default(),
            edge: EdgeActivity::default(),
        };
        for c in 0..initial.len() {
            p.refresh(c);
        }
        Ok(p)
    }

    pub fn surface(&self) -> &SurfaceConfig {
        &self.surface
    }

    pub fn counts(&self) -> EventCounts {
        self.counts
    }

    fn refresh(&mut self, c: usize) {
        let x = self.surface.lo() + c as i64;
        let down = can_lower(&self.surface, x);
        let up = raise_spin(&self.surface, x).is_some();
        self.set.set(2 * c as u32, down);
        self.set.set(2 * c as u32 + 1, up);
    }

    fn flip_of(&self, id: u32) -> Flip {
        let x = self.surface.lo() + (id / 2) as i64;
        if id % 2 == 0 {
            Flip::new(x, Spin::Plus)
        } else {
            let spin = raise_spin(&self.surface, x).expect("active grow channel");
            Flip::new(x, spin)
        }
    }

    pub fn allowed(&self) -> Vec<Flip> {
        let mut out: Vec<Flip> = self.set.iter().map(|id| self.flip_of(id)).collect();
        out.sort();
        out
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<(Flip, f64)> {
        if self.set.len() == 0 {
            return None;
        }
        let rate = 0.5 * self.set.len() as f64 * self.speed;
        let e: f64 = Exp1.sample(rng);
        let k = rng.random_range(0..self.set.len());
        Some((self.flip_of(self.set.get(k)), e / rate))
    }

    pub fn fire(&mut self, flip: Flip) -> Result<()> {
        let x = flip.column;
        let ok = match flip.spin {
            Spin::Plus => can_lower(&self.surface, x),
            s => raise_spin(&self.surface, x) == Some(s),
        };
        if !ok {
            return Err(Error::Precondition(format!("{flip:?} is not an allowed flip")));
        }
        *self.surface.height_mut(x) += flip.delta();
        let c = (x - self.surface.lo()) as usize;
        for k in c.saturating_sub(1)..=(c + 1).min(self.surface.len() - 1) {
            self.refresh(k);
        }
        // the column at the origin only drops, and that is the boundary move
        if x == 0 {
            self.counts.boundary += 1;
        } else if x < 0 {
            self.counts.zero_range += 1;
        } else {
            self.counts.exclusion += 1;
        }
        if x == self.surface.lo() + 1 {
            self.edge.left += 1;
        }
        if x == self.surface.hi() - 1 {
            self.edge.right += 1;
        }
        Ok(())
    }

    /// The same state in the coupled picture, with `X = -f(0)`.
    pub fn coupled(&self) -> Result<CoupledConfig> {
        let f0 = self.surface.origin_height().ok_or_else(|| Error::Domain("window misses the origin".into()))?;
        let inc = self.surface.to_increments()?;
        Ok(CoupledConfig::from_full_increments(&inc)?.with_crossings((-f0) as u64))
    }
}

/// Runs the flip dynamics of a surface pinned at `f(0) = 0`; observables are
/// read on the coupled picture of the increments.
pub fn run_potts_surface<R: Rng + ?Sized>(
    initial: &SurfaceConfig,
    n: u32,
    t_max: f64,
    schedule: &[f64],
    observables: &Observables,
    rng: &mut R,
) -> Result<Trajectory> {
    if !initial.is_pinned() {
        return Err(Error::Precondition("initial surface must satisfy f(0) = 0".into()));
    }
    if initial.lo() >= -1 || initial.hi() < 2 {
        return Err(Error::Precondition("surface window must contain columns -1, 0, 1 in its interior".into()));
    }
    let schedule = checked_schedule(schedule, t_max)?;
    let mut p = PottsProcess::new(initial, n)?;
    let mut snapshots = Vec::with_capacity(schedule.len());
    let mut t = 0.0;
    let mut integral = 0.0;
    let mut next = 0;
    let activity = |p: &PottsProcess| {
        let s = p.surface();
        f64::from(s.height(0) > s.height(-1))
    };
    loop {
        let drawn = p.draw(rng);
        let t_next = drawn.map_or(f64::INFINITY, |(_, dt)| t + dt);
        while next < schedule.len() && schedule[next] < t_next {
            let ts = schedule[next];
            let at = integral + activity(&p) * (ts - t);
            snapshots.push(observe(&p.coupled()?, ts, at, n, observables)?);
            next += 1;
        }
        if t_next > t_max {
            break;
        }
        let (flip, dt) = drawn.expect("finite time implies a move");
        integral += activity(&p) * dt;
        t = t_next;
        p.fire(flip)?;
    }
    let mut traj = Trajectory { n, schedule, snapshots, counts: p.counts, edge: p.edge, warnings: Vec::new() };
    traj.finish_warnings();
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::allowed_flips;
    use crate::measures::{rng_for, Stream};

    #[test]
    fn flat_surface_never_moves() {
        let f = SurfaceConfig::from_fn(-5, 5, |_| 0).unwrap();
        let mut rng = rng_for(0, Stream::Dynamics);
        let obs = Observables { keep_states: true, ..Default::default() };
        let traj = run_potts_surface(&f, 4, 1.0, &[0.0, 1.0], &obs, &mut rng).unwrap();
        assert_eq!(traj.counts.total(), 0);
        assert_eq!(traj.snapshots[0].state, traj.snapshots[1].state);
    }

    #[test]
    fn channels_track_allowed_flips() {
        let f = SurfaceConfig::from_fn(-6, 6, |x| x.clamp(-3, 3)).unwrap();
        let mut p = PottsProcess::new(&f, 2).unwrap();
        let mut rng = rng_for(5, Stream::Dynamics);
        for _ in 0..300 {
            assert_eq!(p.allowed(), allowed_flips(p.surface()));
            let (flip, _) = p.draw(&mut rng).unwrap();
            p.fire(flip).unwrap();
            assert!(p.surface().heights().windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn unpinned_surface_is_rejected() {
        let f = SurfaceConfig::from_fn(-3, 3, |x| x + 1).unwrap();
        let mut rng = rng_for(0, Stream::Dynamics);
        assert!(run_potts_surface(&f, 2, 1.0, &[1.0], &Observables::default(), &mut rng).is_err());
    }
}
