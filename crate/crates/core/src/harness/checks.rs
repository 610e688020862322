use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ExperimentKind};
use super::replicas::{half_line_sites, map_replicas, replica_seed};
use super::report::{Report, Verdict};
use super::stats::{chi_square_test, ChiSquareTest};
use crate::engine::{
    drive_lockstep, run_coupled_pair, run_reflected_zr, run_zr_comparison, CoupledProcess, CouplingMode,
    CrossingSets, Observables, PottsProcess,
};
use crate::lattice::{CoupledConfig, ExclusionConfig, SurfaceConfig};
use crate::measures::{nu_tilde_pmf, rng_for, sample_zr_initial, ProfileSpec, Stream};
use crate::{Error, Result};

/// Significance level of the stationarity test.
pub const STATIONARITY_LEVEL: f64 = 0.01;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CouplingAtN {
    pub n: u32,
    pub basic_violations: u64,
    pub stirring_violations: u64,
    pub k_violations: u64,
    pub zr_violations: u64,
    /// Replicas whose final `𝓚(ξ) ≤ 𝓚(ξ̄)` failed.
    pub k_final_violations: u64,
    pub mean_attached: f64,
    pub identical_paths_agree: bool,
    pub events: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingSummary {
    pub experiment: String,
    pub config_hash: String,
    pub replicas: usize,
    pub per_n: Vec<CouplingAtN>,
}

impl CouplingSummary {
    pub fn into_report(self) -> Result<Report> {
        let mut report = Report::new(self.experiment.clone(), self.config_hash.clone());
        let sum = |f: fn(&CouplingAtN) -> u64| self.per_n.iter().map(f).sum::<u64>();
        let total = |x: u64| format!("{x} violating events over {} replicas per N", self.replicas);
        report.verdicts.push(Verdict::new("coupling:basic-order", sum(|c| c.basic_violations) == 0, total(sum(|c| c.basic_violations))));
        report.verdicts.push(Verdict::new(
            "coupling:stirring-order",
            sum(|c| c.stirring_violations) == 0,
            total(sum(|c| c.stirring_violations)),
        ));
        let k = sum(|c| c.k_violations) + sum(|c| c.k_final_violations);
        report.verdicts.push(Verdict::new("coupling:stirring-k-order", k == 0, total(k)));
        report.verdicts.push(Verdict::new(
            "coupling:zr-comparison-order",
            sum(|c| c.zr_violations) == 0,
            total(sum(|c| c.zr_violations)),
        ));
        report.verdicts.push(Verdict::new(
            "coupling:identical-initials",
            self.per_n.iter().all(|c| c.identical_paths_agree),
            "identical exclusion initials stay identical",
        ));
        report.summary = serde_json::to_value(&self)?;
        Ok(report)
    }
}

/// Ordered pair of exclusion initials from one uniform per site.
fn ordered_pair(len: usize, low: f64, high: f64, seed: u64) -> (ExclusionConfig, ExclusionConfig) {
    let mut rng = rng_for(seed, Stream::Exclusion);
    let us: Vec<f64> = (0..len).map(|_| rng.random::<f64>()).collect();
    (
        ExclusionConfig::new(us.iter().map(|&u| u < low).collect()),
        ExclusionConfig::new(us.iter().map(|&u| u < high).collect()),
    )
}

/// Runs the basic and stirring couplings from ordered Bernoulli initials plus
/// the dissipative versus reflected zero-range comparison.
pub fn run_coupling_experiment(cfg: &ExperimentConfig) -> Result<CouplingSummary> {
    if cfg.kind != ExperimentKind::Coupling {
        return Err(Error::Config(format!("expected a coupling config, got {}", cfg.kind.name())));
    }
    cfg.validate()?;
    let mut per_n = Vec::new();
    for (k, &n) in cfg.n.iter().enumerate() {
        let sites = half_line_sites(cfg, n);
        let nn = n as usize;
        let sets = CrossingSets { lambda: 1..=nn.min(sites), gamma: (nn + 1)..=(2 * nn) };
        let outcomes = map_replicas(cfg.workers, cfg.replicas, |r| {
            let seed = replica_seed(cfg, k, r);
            let eta = sample_zr_initial(&cfg.rho0, n, -(sites as i64), 0, &mut rng_for(seed, Stream::Dissipative))?;
            let (lower, upper) = ordered_pair(sites, cfg.coupling_low, cfg.coupling_high, seed);
            let x = CoupledConfig::new(eta.clone(), lower)?;
            let y = CoupledConfig::new(eta.clone(), upper)?;
            let mut rng = rng_for(seed, Stream::Dynamics);
            let basic = run_coupled_pair((&x, &y), CouplingMode::Basic, cfg.rb, n, cfg.t, None, &mut rng)?;
            let stirring =
                run_coupled_pair((&x, &y), CouplingMode::Stirring, cfg.rb, n, cfg.t, Some(sets.clone()), &mut rng)?;
            let zr = run_zr_comparison(&eta, &eta, cfg.rb, n, cfg.t, &mut rng)?;
            let same = if r == 0 {
                let rep = run_coupled_pair((&x, &x), CouplingMode::Basic, cfg.rb, n, cfg.t, None, &mut rng)?;
                let count = x.xi().particle_count() as u64;
                Some(rep.order_violations == 0 && rep.attached == count)
            } else {
                None
            };
            Ok((basic, stirring, zr, same))
        })?;
        let mut c = CouplingAtN { n, identical_paths_agree: true, ..Default::default() };
        for (basic, stirring, zr, same) in &outcomes {
            c.basic_violations += basic.order_violations;
            c.stirring_violations += stirring.order_violations;
            c.k_violations += stirring.k_violations;
            c.zr_violations += zr.order_violations;
            if let Some((a, b)) = stirring.k_final {
                c.k_final_violations += u64::from(a > b);
            }
            c.mean_attached += stirring.attached as f64 / outcomes.len() as f64;
            c.events += basic.events + stirring.events + zr.events;
            if let Some(ok) = same {
                c.identical_paths_agree &= ok;
            }
        }
        per_n.push(c);
    }
    Ok(CouplingSummary {
        experiment: cfg.kind.name().into(),
        config_hash: cfg.hash(),
        replicas: cfg.replicas,
        per_n,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationarityAtN {
    pub n: u32,
    pub sites: usize,
    pub test: ChiSquareTest,
    pub mass_conserved: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationaritySummary {
    pub experiment: String,
    pub config_hash: String,
    pub alpha: f64,
    pub t: f64,
    pub per_n: Vec<StationarityAtN>,
}

impl StationaritySummary {
    pub fn into_report(self) -> Result<Report> {
        let mut report = Report::new(self.experiment.clone(), self.config_hash.clone());
        for s in &self.per_n {
            report.verdicts.push(Verdict::new(
                format!("stationarity:N={}", s.n),
                s.test.p_value > STATIONARITY_LEVEL,
                format!(
                    "chi-square {:.3} on {} dof, p = {:.4} from {} pooled site counts at t = {}",
                    s.test.statistic,
                    s.test.dof,
                    s.test.p_value,
                    s.test.observed.iter().sum::<u64>(),
                    self.t
                ),
            ));
        }
        report.verdicts.push(Verdict::new(
            "stationarity:mass",
            self.per_n.iter().all(|s| s.mass_conserved),
            "reflected zero-range keeps its particle count",
        ));
        report.summary = serde_json::to_value(&self)?;
        Ok(report)
    }
}

/// Reflected zero-range on `[-LN, 0]` started from `ν̃_α`; pooled site marginals
/// at time `T` are tested against `ν̃_α`.
pub fn run_stationarity_experiment(cfg: &ExperimentConfig) -> Result<StationaritySummary> {
    if cfg.kind != ExperimentKind::Stationarity {
        return Err(Error::Config(format!("expected a stationarity config, got {}", cfg.kind.name())));
    }
    cfg.validate()?;
    let profile = ProfileSpec::constant(cfg.alpha);
    let obs = Observables { keep_states: true, ..Default::default() };
    let mut per_n = Vec::new();
    for (k, &n) in cfg.n.iter().enumerate() {
        let sites = half_line_sites(cfg, n);
        let outcomes = map_replicas(cfg.workers, cfg.replicas, |r| {
            let seed = replica_seed(cfg, k, r);
            let eta = sample_zr_initial(&profile, n, -(sites as i64), 0, &mut rng_for(seed, Stream::Dissipative))?;
            let mut rng = rng_for(seed, Stream::Dynamics);
            let traj = run_reflected_zr(&eta, n, cfg.t, &[cfg.t], &obs, &mut rng)?;
            let end = traj
                .final_snapshot()
                .and_then(|s| s.state.as_ref())
                .ok_or_else(|| Error::Validation("missing final state".into()))?;
            Ok((end.eta().counts().to_vec(), end.eta().total() == eta.total()))
        })?;
        let samples: Vec<u32> = outcomes.iter().flat_map(|(c, _)| c.iter().copied()).collect();
        let test = chi_square_test(&samples, |j| nu_tilde_pmf(cfg.alpha, j).unwrap_or(0.0))?;
        per_n.push(StationarityAtN { n, sites: sites + 1, test, mass_conserved: outcomes.iter().all(|(_, m)| *m) });
    }
    Ok(StationaritySummary {
        experiment: cfg.kind.name().into(),
        config_hash: cfg.hash(),
        alpha: cfg.alpha,
        t: cfg.t,
        per_n,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PottsCheckSummary {
    pub experiment: String,
    pub config_hash: String,
    pub runs: usize,
    pub steps: usize,
    pub failures: Vec<String>,
}

impl PottsCheckSummary {
    pub fn into_report(self) -> Result<Report> {
        let mut report = Report::new(self.experiment.clone(), self.config_hash.clone());
        report.verdicts.push(Verdict::new(
            "potts-check:lockstep",
            self.failures.is_empty(),
            format!("{} runs, {} lockstep moves, {} failures", self.runs, self.steps, self.failures.len()),
        ));
        report.summary = serde_json::to_value(&self)?;
        Ok(report)
    }
}

/// Drives the flip dynamics and the coupled process with `r_b = 1/2` in
/// lockstep from random local-equilibrium states, `20 × sites` moves each.
pub fn run_potts_check(cfg: &ExperimentConfig) -> Result<PottsCheckSummary> {
    cfg.validate()?;
    let mut runs = 0;
    let mut steps = 0;
    let mut failures = Vec::new();
    for (k, &n) in cfg.n.iter().enumerate() {
        let sites = half_line_sites(cfg, n).max(2);
        let outcomes = map_replicas(cfg.workers, cfg.replicas, |r| {
            let seed = replica_seed(cfg, k, r);
            let eta = sample_zr_initial(&cfg.rho0, n, -(sites as i64), 0, &mut rng_for(seed, Stream::Dissipative))?;
            let xi = crate::measures::sample_exclusion_initial(&cfg.zeta0, n, sites, &mut rng_for(seed, Stream::Exclusion))?;
            let c = CoupledConfig::new(eta, xi)?;
            let surface = SurfaceConfig::from_increments(&c.to_full_increments(), 0)?;
            let mut a = CoupledProcess::new(&c, 0.5, n)?;
            let mut b = PottsProcess::new(&surface, n)?;
            let mut rng = rng_for(seed, Stream::Dynamics);
            Ok(drive_lockstep(&mut a, &mut b, 20 * sites, &mut rng).map(|rep| rep.steps).map_err(|e| format!("N={n} seed={seed}: {e}")))
        })?;
        for o in outcomes {
            runs += 1;
            match o {
                Ok(s) => steps += s,
                Err(e) => failures.push(e),
            }
        }
    }
    Ok(PottsCheckSummary { experiment: "potts-check".into(), config_hash: cfg.hash(), runs, steps, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(kind: ExperimentKind) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(kind);
        cfg.n = vec![8];
        cfg.replicas = 5;
        cfg.t = 0.2;
        cfg.domain = Some(2.0);
        cfg
    }

    #[test]
    fn ordered_pair_is_ordered() {
        let (a, b) = ordered_pair(500, 0.3, 0.7, 4);
        assert!(a.occupancy().iter().zip(b.occupancy()).all(|(x, y)| !x || *y));
        assert!(a.particle_count() < b.particle_count());
    }

    #[test]
    fn small_coupling_run_has_no_violations() {
        let rep = run_coupling_experiment(&small(ExperimentKind::Coupling)).unwrap().into_report().unwrap();
        assert!(rep.passed(), "{:?}", rep.verdicts);
    }

    #[test]
    fn stationarity_summary_counts_every_site() {
        let s = run_stationarity_experiment(&small(ExperimentKind::Stationarity)).unwrap();
        assert_eq!(s.per_n[0].test.observed.iter().sum::<u64>(), 5 * 17);
        assert!(s.per_n[0].mass_conserved);
    }

    #[test]
    fn lockstep_check_passes() {
        let mut cfg = small(ExperimentKind::HydroZr);
        cfg.domain = Some(1.0);
        let s = run_potts_check(&cfg).unwrap();
        assert!(s.failures.is_empty(), "{:?}", s.failures);
        assert!(s.steps > 0);
    }
}
