use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::lattice::{CoupledConfig, SurfaceConfig};
use crate::measures::{interface_pairing, EmpiricalRecord, TestFunction};
use crate::{Error, Result};

/// What to measure at each scheduled time.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    /// Paired with the dissipative zero-range `η` on `[lo, 0]`.
    #[serde(default)]
    pub eta: Vec<TestFunction>,
    /// Paired with the exclusion `ξ` on `[1, L]`.
    #[serde(default)]
    pub xi: Vec<TestFunction>,
    /// Paired with the full-line increments (positive side through the inverse gap map).
    #[serde(default)]
    pub full: Vec<TestFunction>,
    /// Paired with `(f_t(x) - f_t(0)) / N`.
    #[serde(default)]
    pub interface: Vec<TestFunction>,
    #[serde(default)]
    pub block_eps: Option<f64>,
    /// Keep a copy of the configuration in every snapshot.
    #[serde(default)]
    pub keep_states: bool,
}

/// Measurements at one scheduled macroscopic time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub crossings: u64,
    pub left_mass: u64,
    pub right_count: u64,
    /// `∫_0^t g(η_s(0)) ds` in macroscopic time.
    pub boundary_integral: f64,
    pub eta: EmpiricalRecord,
    pub xi: EmpiricalRecord,
    pub full: EmpiricalRecord,
    pub interface: BTreeMap<String, f64>,
    #[serde(skip)]
    pub state: Option<CoupledConfig>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventCounts {
    pub exclusion: u64,
    pub zero_range: u64,
    pub boundary: u64,
}

impl EventCounts {
    pub fn total(&self) -> u64 {
        self.exclusion + self.zero_range + self.boundary
    }
}

/// Moves touching the truncation edges: the leftmost dissipative site and the
/// last exclusion site.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeActivity {
    pub left: u64,
    pub right: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub n: u32,
    pub schedule: Vec<f64>,
    pub snapshots: Vec<Snapshot>,
    pub counts: EventCounts,
    pub edge: EdgeActivity,
    pub warnings: Vec<String>,
}

/// One line of the trajectory CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub t: f64,
    pub observable_id: String,
    pub value: f64,
    pub replica: u64,
    #[serde(rename = "N")]
    pub n: u32,
    pub seed: u64,
}

impl Trajectory {
    pub fn snapshot_at(&self, t: f64) -> Option<&Snapshot> {
        self.snapshots.iter().find(|s| (s.t - t).abs() < 1e-12)
    }

    pub fn final_snapshot(&self) -> Option<&Snapshot> {
        self.snapshots.last()
    }

    pub fn crossing_series(&self) -> Vec<(f64, u64)> {
        self.snapshots.iter().map(|s| (s.t, s.crossings)).collect()
    }

    /// Flattens every scalar observable into CSV rows.
    pub fn to_rows(&self, replica: u64, seed: u64) -> Vec<Row> {
        let n = self.n;
        let mut rows = Vec::new();
        for s in &self.snapshots {
            let mut push = |id: String, value: f64| {
                rows.push(Row { t: s.t, observable_id: id, value, replica, n, seed });
            };
            push("X".into(), s.crossings as f64);
            push("X_over_N".into(), s.crossings as f64 / n as f64);
            push("boundary_integral".into(), s.boundary_integral);
            for (prefix, rec) in [("eta", &s.eta), ("xi", &s.xi), ("full", &s.full)] {
                for (id, v) in &rec.pairings {
                    push(format!("{prefix}:{id}"), *v);
                }
                for (u, v) in &rec.block_densities {
                    push(format!("{prefix}_block:{u:.6}"), *v);
                }
            }
            for (id, v) in &s.interface {
                push(format!("interface:{id}"), *v);
            }
        }
        rows
    }

    pub(crate) fn finish_warnings(&mut self) {
        if self.edge.left > 0 || self.edge.right > 0 {
            self.warnings.push(format!(
                "truncation edge activity: {} moves at the left edge, {} at the right edge",
                self.edge.left, self.edge.right
            ));
        }
    }
}

/// Evaluates the requested observables on a coupled state.
pub(crate) fn observe(
    c: &CoupledConfig,
    t: f64,
    boundary_integral: f64,
    n: u32,
    obs: &Observables,
) -> Result<Snapshot> {
    let blocks = |rec: EmpiricalRecord, field: &dyn crate::measures::LatticeField| -> Result<EmpiricalRecord> {
        match obs.block_eps {
            Some(eps) => rec.with_blocks(field, eps),
            None => Ok(rec),
        }
    };
    let eta = blocks(EmpiricalRecord::of(c.eta(), &obs.eta, n), c.eta())?;
    let xi = blocks(EmpiricalRecord::of(c.xi(), &obs.xi, n), c.xi())?;
    let (full, interface) = if obs.full.is_empty() && obs.interface.is_empty() {
        (EmpiricalRecord::of(c.eta(), &[], n), BTreeMap::new())
    } else {
        let inc = c.to_full_increments();
        let full = EmpiricalRecord::of(&inc, &obs.full, n);
        let mut interface = BTreeMap::new();
        if !obs.interface.is_empty() {
            let f = SurfaceConfig::from_increments(&inc, -(c.crossings() as i64))?;
            for g in &obs.interface {
                interface.insert(g.id.clone(), interface_pairing(&f, g, n)?);
            }
        }
        (full, interface)
    };
    Ok(Snapshot {
        t,
        crossings: c.crossings(),
        left_mass: c.eta().total(),
        right_count: c.xi().particle_count() as u64,
        boundary_integral,
        eta,
        xi,
        full,
        interface,
        state: obs.keep_states.then(|| c.clone()),
    })
}

/// Sorted copy of a schedule after checking it lies in `[0, t_max]`.
pub(crate) fn checked_schedule(schedule: &[f64], t_max: f64) -> Result<Vec<f64>> {
    if !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(Error::Precondition(format!("horizon must be finite and nonnegative, got {t_max}")));
    }
    if let Some(t) = schedule.iter().find(|&&t| !(0.0..=t_max).contains(&t)) {
        return Err(Error::Precondition(format!("observation time {t} outside [0, {t_max}]")));
    }
    let mut s = schedule.to_vec();
    s.sort_by(f64::total_cmp);
    s.dedup();
    Ok(s)
}
