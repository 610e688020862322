use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ExperimentKind};
use super::replicas::{edge_warning, map_replicas, replica_seed, sample_coupled};
use super::report::{Report, Verdict};
use super::stats::{Summary, Z95};
use crate::engine::{run, Observables, Row, RunParams, Trajectory};
use crate::measures::{rng_for, Stream};
use crate::pde::{solve_dissipative, Grid, PdeSolution};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontAtN {
    pub n: u32,
    /// `X_T / N` over replicas.
    pub summary: Summary,
    pub v: f64,
    pub bias: f64,
    pub contains_v: bool,
    pub monotone: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontReport {
    pub experiment: String,
    pub config_hash: String,
    pub rb: f64,
    pub t: f64,
    pub per_n: Vec<FrontAtN>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub rows: Vec<Row>,
}

impl FrontReport {
    pub fn into_report(self) -> Result<Report> {
        let mut report = Report::new(self.experiment.clone(), self.config_hash.clone());
        let last = self.per_n.last().expect("N list is nonempty");
        report.verdicts.push(Verdict::new(
            "front:ci-contains-v",
            last.contains_v,
            format!(
                "N={}: X_T/N = {:.5} with 95% CI [{:.5}, {:.5}], v_T = {:.5}, bias {:+.5}",
                last.n, last.summary.mean, last.summary.ci_lo, last.summary.ci_hi, last.v, last.bias
            ),
        ));
        let monotone = self.per_n.iter().all(|f| f.monotone);
        report.verdicts.push(Verdict::new("front:monotone", monotone, "X_t/N nondecreasing along every replica"));
        report.warnings = self.warnings.clone();
        report.summary = serde_json::to_value(&self)?;
        report.rows = self.rows;
        Ok(report)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluxAtN {
    pub n: u32,
    /// `∫_0^T g(η_s(0)) ds` over replicas.
    pub integral: Summary,
    pub bound: f64,
    pub upper: f64,
    pub within_bound: bool,
    /// `r_b N ∫_0^T g(η_s(0)) ds - v_T` over replicas.
    pub replacement_gap: Summary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluxReport {
    pub experiment: String,
    pub config_hash: String,
    pub rb: f64,
    pub t: f64,
    pub v: f64,
    pub per_n: Vec<FluxAtN>,
    /// `|gap|` does not grow along the N list beyond the combined 95% half-widths.
    pub gap_non_increasing: bool,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub rows: Vec<Row>,
}

impl FluxReport {
    pub fn into_report(self) -> Result<Report> {
        let mut report = Report::new(self.experiment.clone(), self.config_hash.clone());
        let detail: Vec<String> = self
            .per_n
            .iter()
            .map(|f| format!("N={}: mean {:.6}, upper {:.6}, bound {:.6}", f.n, f.integral.mean, f.upper, f.bound))
            .collect();
        report.verdicts.push(Verdict::new(
            "flux:bound",
            self.per_n.iter().all(|f| f.within_bound),
            detail.join("; "),
        ));
        if self.rb > 0.0 {
            let gaps: Vec<String> = self
                .per_n
                .iter()
                .map(|f| format!("N={}: {:+.5} ± {:.5}", f.n, f.replacement_gap.mean, Z95 * f.replacement_gap.se))
                .collect();
            report.verdicts.push(Verdict::new(
                "flux:replacement-trend",
                self.gap_non_increasing,
                format!("r_b N ∫g - v_T: {}", gaps.join(", ")),
            ));
        }
        report.warnings = self.warnings.clone();
        report.summary = serde_json::to_value(&self)?;
        report.rows = self.rows;
        Ok(report)
    }
}

fn front_pde(cfg: &ExperimentConfig) -> Result<PdeSolution> {
    let l = cfg.domain_half_width();
    solve_dissipative(&cfg.rho0, &Grid::stable(-l, 0.0, cfg.du, cfg.t)?)
}

fn run_replicas(cfg: &ExperimentConfig, k: usize, n: u32, schedule: &[f64]) -> Result<Vec<(Trajectory, u64)>> {
    map_replicas(cfg.workers, cfg.replicas, |r| {
        let seed = replica_seed(cfg, k, r);
        let initial = sample_coupled(cfg, n, seed)?;
        let mut rng = rng_for(seed, Stream::Dynamics);
        let params = RunParams::new(n, cfg.t, cfg.rb, schedule.to_vec());
        Ok((run(&initial, &params, &Observables::default(), &mut rng)?, seed))
    })
}

fn schedule_with_end(cfg: &ExperimentConfig) -> Vec<f64> {
    let mut s = cfg.schedule();
    s.push(cfg.t);
    s.sort_by(f64::total_cmp);
    s.dedup();
    s
}

fn collect_rows(k: usize, cfg: &ExperimentConfig, trajs: &[(Trajectory, u64)], rows: &mut Vec<Row>) {
    for (r, (traj, seed)) in trajs.iter().enumerate() {
        rows.extend(traj.to_rows((k * cfg.replicas + r) as u64, *seed));
    }
}

fn edge_summary(n: u32, cfg: &ExperimentConfig, trajs: &[(Trajectory, u64)]) -> Option<String> {
    let touched = trajs.iter().filter(|(t, _)| t.edge.left + t.edge.right > 0).count();
    let left = trajs.iter().map(|(t, _)| t.edge.left).sum();
    let right = trajs.iter().map(|(t, _)| t.edge.right).sum();
    edge_warning(n, touched, cfg.replicas, left, right)
}

/// Compares `X_T / N` with `v_T` from the dissipative solver.
pub fn run_front_experiment(cfg: &ExperimentConfig) -> Result<FrontReport> {
    if cfg.kind != ExperimentKind::Front {
        return Err(Error::Config(format!("expected a front config, got {}", cfg.kind.name())));
    }
    cfg.validate()?;
    let v = front_pde(cfg)?.v_at(cfg.t);
    let schedule = schedule_with_end(cfg);
    let mut per_n = Vec::new();
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for (k, &n) in cfg.n.iter().enumerate() {
        let trajs = run_replicas(cfg, k, n, &schedule)?;
        let xs: Vec<f64> = trajs
            .iter()
            .map(|(t, _)| t.final_snapshot().map_or(0.0, |s| s.crossings as f64 / n as f64))
            .collect();
        let monotone = trajs.iter().all(|(t, _)| t.crossing_series().windows(2).all(|w| w[1].1 >= w[0].1));
        let summary = Summary::of(&xs);
        per_n.push(FrontAtN { n, summary, v, bias: summary.mean - v, contains_v: summary.contains(v), monotone });
        warnings.extend(edge_summary(n, cfg, &trajs));
        collect_rows(k, cfg, &trajs, &mut rows);
    }
    Ok(FrontReport {
        experiment: cfg.kind.name().into(),
        config_hash: cfg.hash(),
        rb: cfg.rb,
        t: cfg.t,
        per_n,
        warnings,
        rows,
    })
}

/// Estimates `E ∫_0^T g(η_s(0)) ds` against the bound `T / sqrt(N)` and
/// compares `r_b N ∫ g` with `v_T`.
pub fn run_flux_experiment(cfg: &ExperimentConfig) -> Result<FluxReport> {
    if cfg.kind != ExperimentKind::Flux {
        return Err(Error::Config(format!("expected a flux config, got {}", cfg.kind.name())));
    }
    cfg.validate()?;
    let v = front_pde(cfg)?.v_at(cfg.t);
    let schedule = schedule_with_end(cfg);
    let mut per_n = Vec::new();
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for (k, &n) in cfg.n.iter().enumerate() {
        let trajs = run_replicas(cfg, k, n, &schedule)?;
        let integrals: Vec<f64> =
            trajs.iter().map(|(t, _)| t.final_snapshot().map_or(0.0, |s| s.boundary_integral)).collect();
        let gaps: Vec<f64> = integrals.iter().map(|i| cfg.rb * n as f64 * i - v).collect();
        let integral = Summary::of(&integrals);
        let bound = cfg.t / (n as f64).sqrt();
        let upper = integral.upper_one_sided();
        per_n.push(FluxAtN { n, integral, bound, upper, within_bound: upper <= bound, replacement_gap: Summary::of(&gaps) });
        warnings.extend(edge_summary(n, cfg, &trajs));
        collect_rows(k, cfg, &trajs, &mut rows);
    }
    let gap_non_increasing = per_n.windows(2).all(|w| {
        let (a, b) = (&w[0].replacement_gap, &w[1].replacement_gap);
        b.mean.abs() <= a.mean.abs() + Z95 * (a.se * a.se + b.se * b.se).sqrt()
    });
    Ok(FluxReport {
        experiment: cfg.kind.name().into(),
        config_hash: cfg.hash(),
        rb: cfg.rb,
        t: cfg.t,
        v,
        per_n,
        gap_non_increasing,
        warnings,
        rows,
    })
}
