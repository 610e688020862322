use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ExperimentKind, Observable};
use super::dictionary::dictionary_for;
use super::replicas::{edge_warning, map_replicas, replica_seed, sample_coupled};
use super::report::{Report, Verdict};
use super::stats::{strictly_decreasing, Summary};
use crate::engine::{run, run_potts_surface, Observables, Row, RunParams, Snapshot, Trajectory};
use crate::lattice::SurfaceConfig;
use crate::measures::{block_density, ProfileSpec, TestFunction};
use crate::pde::{
    integrate_lambda, rho_from_zeta, solve_dissipative, solve_exclusion_pde, solve_fullline_zr_pde, Grid, Profile,
};
use crate::{Error, Result};

/// Simpson panels used for `∫ G f`.
const QUADRATURE_PANELS: usize = 2000;

/// Mean distance and interval at one N.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceAtN {
    pub n: u32,
    pub summary: Summary,
    /// Dictionary entry attaining the sup most often.
    pub dominant_function: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableConvergence {
    pub observable: Observable,
    pub per_n: Vec<DistanceAtN>,
    /// Upper 95% bound at the largest N is below the tolerance.
    pub below_tolerance: bool,
    /// Means strictly decrease along the N list.
    pub strictly_decreasing: bool,
}

impl ObservableConvergence {
    pub fn passed(&self) -> bool {
        self.below_tolerance || self.strictly_decreasing
    }
}

/// Mean absolute gap between block densities and the PDE profile at the final time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockSensitivity {
    pub observable: Observable,
    pub n: u32,
    pub eps: f64,
    pub mean_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub experiment: String,
    pub config_hash: String,
    pub tolerance: f64,
    pub schedule: Vec<f64>,
    /// `∫ G f_t` per observable, time and test function.
    pub expected: BTreeMap<Observable, Vec<BTreeMap<String, f64>>>,
    pub observables: Vec<ObservableConvergence>,
    pub block_sensitivity: Vec<BlockSensitivity>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub rows: Vec<Row>,
}

impl ConvergenceReport {
    pub fn observable(&self, o: Observable) -> Option<&ObservableConvergence> {
        self.observables.iter().find(|c| c.observable == o)
    }

    pub fn into_report(self) -> Result<Report> {
        let mut report = Report::new(self.experiment.clone(), self.config_hash.clone());
        for c in &self.observables {
            let means: Vec<String> =
                c.per_n.iter().map(|d| format!("N={}: {:.4} ± {:.4}", d.n, d.summary.mean, d.summary.ci_hi - d.summary.mean)).collect();
            report.verdicts.push(Verdict::new(
                format!("hydro:{}", c.observable.name()),
                c.passed(),
                format!(
                    "{}; below tolerance {}: {}; strictly decreasing: {}",
                    means.join(", "),
                    self.tolerance,
                    c.below_tolerance,
                    c.strictly_decreasing
                ),
            ));
        }
        report.warnings = self.warnings.clone();
        report.summary = serde_json::to_value(&self)?;
        report.rows = self.rows;
        Ok(report)
    }
}

/// PDE fields at each scheduled time, per observable.
#[derive(Clone, Debug)]
pub struct ReferenceFields {
    pub schedule: Vec<f64>,
    pub fields: BTreeMap<Observable, Vec<Profile>>,
    /// Solver domain per observable; the truncated lattice has nothing outside it.
    pub windows: BTreeMap<Observable, (f64, f64)>,
}

/// Initial full-line density: `rho0` on the left, the gap density of `zeta0`
/// on the right, up to `M(L) = ∫_0^L ζ_0` (taken at the last ζ cell center)
/// rounded down to the grid.
pub fn fullline_initial(cfg: &ExperimentConfig) -> Result<(ProfileSpec, f64)> {
    let l = cfg.domain_half_width();
    let du = cfg.du;
    let cells = (l / du).round() as usize;
    let centers: Vec<f64> = (0..cells).map(|j| (j as f64 + 0.5) * du).collect();
    let zeta = Profile::new(0.0, centers.clone(), centers.iter().map(|&u| cfg.zeta0.eval(u)).collect());
    // M at the last cell center, the end of the range of the transform
    let mass = zeta.values.iter().sum::<f64>() * du - 0.5 * du * zeta.values.last().copied().unwrap_or(0.0);
    let right = ((mass / du) + 1e-9).floor() * du;
    if !(right >= du) {
        return Err(Error::Config("initial exclusion mass too small for a full-line domain".into()));
    }
    let right_nodes: Vec<f64> = (0..=(right / du).round() as usize).map(|k| k as f64 * du).collect();
    let right_values = rho_from_zeta(&zeta, &right_nodes)?;
    let left_count = (l / du).round() as usize;
    let mut points: Vec<(f64, f64)> =
        (0..left_count).map(|k| -l + k as f64 * du).map(|u| (u, cfg.rho0.eval(u))).collect();
    points.extend(right_nodes.into_iter().zip(right_values));
    Ok((ProfileSpec::table(&points), right))
}

/// Solves the PDEs needed for `observables` on the configured grid.
pub fn reference_fields(cfg: &ExperimentConfig, observables: &[Observable]) -> Result<ReferenceFields> {
    let schedule = cfg.schedule();
    let l = cfg.domain_half_width();
    let at = |profiles: &crate::pde::PdeSolution| -> Vec<Profile> {
        schedule.iter().map(|&t| profiles.profile_at(t).clone()).collect()
    };
    let mut fields = BTreeMap::new();
    let mut windows = BTreeMap::new();
    let need = |o: Observable| observables.contains(&o);
    if need(Observable::Eta) || need(Observable::Xi) {
        let grid = Grid::stable(-l, 0.0, cfg.du, cfg.t)?.with_snapshots(&schedule);
        let rho = solve_dissipative(&cfg.rho0, &grid)?;
        if need(Observable::Xi) {
            let zgrid = Grid::stable(0.0, l, cfg.du, cfg.t)?.with_snapshots(&schedule);
            let zeta = solve_exclusion_pde(&cfg.zeta0, &rho.a_series, &zgrid)?;
            fields.insert(Observable::Xi, at(&zeta));
            windows.insert(Observable::Xi, (0.0, l));
        }
        if need(Observable::Eta) {
            fields.insert(Observable::Eta, at(&rho));
            windows.insert(Observable::Eta, (-l, 0.0));
        }
    }
    if need(Observable::Full) || need(Observable::Interface) {
        let (rho0, right) = fullline_initial(cfg)?;
        let grid = Grid::stable(-l, right, cfg.du, cfg.t)?.with_snapshots(&schedule);
        let full = solve_fullline_zr_pde(&rho0, &grid)?;
        let profiles = at(&full);
        if need(Observable::Interface) {
            fields.insert(Observable::Interface, profiles.iter().map(integrate_lambda).collect());
            windows.insert(Observable::Interface, (-l, right));
        }
        if need(Observable::Full) {
            fields.insert(Observable::Full, profiles);
            windows.insert(Observable::Full, (-l, right));
        }
    }
    Ok(ReferenceFields { schedule, fields, windows })
}

fn empirical(snap: &Snapshot, o: Observable) -> &BTreeMap<String, f64> {
    match o {
        Observable::Xi => &snap.xi.pairings,
        Observable::Eta => &snap.eta.pairings,
        Observable::Full => &snap.full.pairings,
        Observable::Interface => &snap.interface,
    }
}

/// `max_t sup_G |⟨π_t, G⟩ - ∫ G f_t|` for one trajectory and the id attaining it.
fn distance(
    traj: &Trajectory,
    o: Observable,
    dictionary: &[TestFunction],
    expected: &[Vec<f64>],
) -> Result<(f64, String)> {
    let mut best = (0.0, String::new());
    for (i, snap) in traj.snapshots.iter().enumerate() {
        let emp = empirical(snap, o);
        for (g, e) in dictionary.iter().zip(&expected[i]) {
            let v = emp
                .get(&g.id)
                .ok_or_else(|| Error::Validation(format!("missing pairing {} for {}", g.id, o.name())))?;
            let d = (v - e).abs();
            if d > best.0 || best.1.is_empty() {
                best = (d, g.id.clone());
            }
        }
    }
    Ok(best)
}

fn block_gap(traj: &Trajectory, o: Observable, field: &Profile, n: u32, eps: f64, window: f64) -> Result<Option<f64>> {
    let Some(state) = traj.final_snapshot().and_then(|s| s.state.as_ref()) else {
        return Ok(None);
    };
    if eps * (n as f64) < 1.0 {
        return Ok(None);
    }
    let blocks = match o {
        Observable::Xi => block_density(state.xi(), n, eps)?,
        Observable::Eta => block_density(state.eta(), n, eps)?,
        _ => return Ok(None),
    };
    let near: Vec<f64> =
        blocks.iter().filter(|(u, _)| u.abs() <= window).map(|&(u, v)| (v - field.eval(u)).abs()).collect();
    Ok((!near.is_empty()).then(|| near.iter().sum::<f64>() / near.len() as f64))
}

struct ReplicaOutcome {
    distances: Vec<(f64, String)>,
    blocks: Vec<Option<(f64, f64)>>,
    rows: Vec<Row>,
    edge: (u64, u64),
}

/// Runs the engine replicas for every N, pairs the empirical fields with the
/// dictionary and compares them with the PDE solution.
pub fn run_hydro_experiment(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    if !cfg.kind.is_hydro() {
        return Err(Error::Config(format!("{} is not a hydrodynamic experiment", cfg.kind.name())));
    }
    cfg.validate()?;
    let observables = cfg.observables();
    if observables.is_empty() {
        return Err(Error::Config("no observables requested".into()));
    }
    let reference = reference_fields(cfg, &observables)?;
    let schedule = reference.schedule.clone();
    let dictionaries: BTreeMap<Observable, Vec<TestFunction>> =
        observables.iter().map(|&o| (o, dictionary_for(cfg, o))).collect();
    let expected: BTreeMap<Observable, Vec<Vec<f64>>> = observables
        .iter()
        .map(|&o| {
            let (lo, hi) = reference.windows[&o];
            let inside = |p: &Profile, u: f64| if u < lo || u > hi { 0.0 } else { p.eval(u) };
            let per_time = reference.fields[&o]
                .iter()
                .map(|p| {
                    dictionaries[&o].iter().map(|g| g.integrate_against(|u| inside(p, u), QUADRATURE_PANELS)).collect()
                })
                .collect();
            (o, per_time)
        })
        .collect();
    let mut obs = Observables { keep_states: true, ..Default::default() };
    for &o in &observables {
        let d = dictionaries[&o].clone();
        match o {
            Observable::Xi => obs.xi = d,
            Observable::Eta => obs.eta = d,
            Observable::Full => obs.full = d,
            Observable::Interface => obs.interface = d,
        }
    }
    let window = 2.0 * cfg.support_radius;
    let mut per_obs: BTreeMap<Observable, Vec<DistanceAtN>> = BTreeMap::new();
    let mut block_sensitivity = Vec::new();
    let mut warnings = Vec::new();
    let mut rows = Vec::new();
    if cfg.kind == ExperimentKind::PottsProfile && cfg.rb != 0.5 {
        warnings.push(format!("potts-profile runs the flip dynamics, whose boundary rate is 1/2; rb = {} ignored", cfg.rb));
    }
    for (k, &n) in cfg.n.iter().enumerate() {
        let outcomes = map_replicas(cfg.workers, cfg.replicas, |r| {
            let seed = replica_seed(cfg, k, r);
            let initial = sample_coupled(cfg, n, seed)?;
            let mut rng = crate::measures::rng_for(seed, crate::measures::Stream::Dynamics);
            let traj = if cfg.kind == ExperimentKind::PottsProfile {
                let surface = SurfaceConfig::from_increments(&initial.to_full_increments(), 0)?;
                run_potts_surface(&surface, n, cfg.t, &schedule, &obs, &mut rng)?
            } else {
                run(&initial, &RunParams::new(n, cfg.t, cfg.rb, schedule.clone()), &obs, &mut rng)?
            };
            let mut distances = Vec::new();
            let mut blocks = Vec::new();
            let mut rows = traj.to_rows((k * cfg.replicas + r) as u64, seed);
            for &o in &observables {
                let d = distance(&traj, o, &dictionaries[&o], &expected[&o])?;
                rows.push(Row {
                    t: cfg.t,
                    observable_id: format!("distance:{}", o.name()),
                    value: d.0,
                    replica: (k * cfg.replicas + r) as u64,
                    n,
                    seed,
                });
                distances.push(d);
                let last = reference.fields[&o].last().expect("schedule is nonempty");
                let one = block_gap(&traj, o, last, n, cfg.block_eps, window)?;
                let two = block_gap(&traj, o, last, n, 2.0 * cfg.block_eps, window)?;
                blocks.push(one.zip(two));
            }
            Ok(ReplicaOutcome { distances, blocks, rows, edge: (traj.edge.left, traj.edge.right) })
        })?;
        for (i, &o) in observables.iter().enumerate() {
            let ds: Vec<f64> = outcomes.iter().map(|x| x.distances[i].0).collect();
            let mut tally: BTreeMap<&str, usize> = BTreeMap::new();
            for x in &outcomes {
                *tally.entry(x.distances[i].1.as_str()).or_default() += 1;
            }
            let dominant = tally.iter().max_by_key(|(_, &c)| c).map(|(id, _)| id.to_string()).unwrap_or_default();
            per_obs.entry(o).or_default().push(DistanceAtN { n, summary: Summary::of(&ds), dominant_function: dominant });
            let gaps: Vec<(f64, f64)> = outcomes.iter().filter_map(|x| x.blocks[i]).collect();
            if !gaps.is_empty() {
                for (j, eps) in [cfg.block_eps, 2.0 * cfg.block_eps].into_iter().enumerate() {
                    let mean = gaps.iter().map(|g| if j == 0 { g.0 } else { g.1 }).sum::<f64>() / gaps.len() as f64;
                    block_sensitivity.push(BlockSensitivity { observable: o, n, eps, mean_gap: mean });
                }
            }
        }
        let touched = outcomes.iter().filter(|x| x.edge.0 + x.edge.1 > 0).count();
        let left = outcomes.iter().map(|x| x.edge.0).sum();
        let right = outcomes.iter().map(|x| x.edge.1).sum();
        warnings.extend(edge_warning(n, touched, cfg.replicas, left, right));
        rows.extend(outcomes.into_iter().flat_map(|x| x.rows));
    }
    let observables = per_obs
        .into_iter()
        .map(|(observable, per_n)| {
            let means: Vec<f64> = per_n.iter().map(|d| d.summary.mean).collect();
            let last = per_n.last().expect("N list is nonempty");
            ObservableConvergence {
                observable,
                below_tolerance: last.summary.ci_hi < cfg.tolerance,
                strictly_decreasing: per_n.len() > 1 && strictly_decreasing(&means),
                per_n,
            }
        })
        .collect();
    Ok(ConvergenceReport {
        experiment: cfg.kind.name().into(),
        config_hash: cfg.hash(),
        tolerance: cfg.tolerance,
        schedule,
        expected: expected
            .iter()
            .map(|(&o, per_time)| {
                let named = per_time
                    .iter()
                    .map(|vals| dictionaries[&o].iter().map(|g| g.id.clone()).zip(vals.iter().copied()).collect())
                    .collect();
                (o, named)
            })
            .collect(),
        observables,
        block_sensitivity,
        warnings,
        rows,
    })
}
