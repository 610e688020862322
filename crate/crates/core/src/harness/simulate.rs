use std::path::Path;

use super::config::{ExperimentConfig, Observable};
use super::dictionary::dictionary_for;
use super::hydro::fullline_initial;
use super::replicas::{edge_warning, map_replicas, replica_seed, sample_coupled};
use super::report::{Report, Verdict};
use crate::engine::{run, Observables, RunParams};
use crate::measures::{rng_for, Stream};
use crate::pde::{
    integrate_lambda, solve_dissipative, solve_exclusion_pde, solve_fullline_zr_pde, write_profiles_csv,
    write_series_csv, write_sidecar, Grid,
};
use crate::Result;

/// Plain coupled-process runs for every N and replica, recording every
/// default observable. The only verdict is the exact mass ledger.
pub fn run_simulation(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let schedule = cfg.schedule();
    let obs = Observables {
        eta: dictionary_for(cfg, Observable::Eta),
        xi: dictionary_for(cfg, Observable::Xi),
        full: dictionary_for(cfg, Observable::Full),
        interface: dictionary_for(cfg, Observable::Interface),
        block_eps: Some(cfg.block_eps),
        keep_states: false,
    };
    let mut report = Report::new("simulate", cfg.hash());
    let mut ledger_ok = true;
    for (k, &n) in cfg.n.iter().enumerate() {
        let eps = (cfg.block_eps * n as f64 >= 1.0).then_some(cfg.block_eps);
        let obs = Observables { block_eps: eps, ..obs.clone() };
        let trajs = map_replicas(cfg.workers, cfg.replicas, |r| {
            let seed = replica_seed(cfg, k, r);
            let initial = sample_coupled(cfg, n, seed)?;
            let mut rng = rng_for(seed, Stream::Dynamics);
            let traj = run(&initial, &RunParams::new(n, cfg.t, cfg.rb, schedule.clone()), &obs, &mut rng)?;
            let ok = traj.snapshots.iter().all(|s| {
                s.left_mass + s.crossings == initial.ledger() && s.right_count as usize == initial.xi().particle_count()
            });
            Ok((traj, seed, ok))
        })?;
        let touched = trajs.iter().filter(|(t, _, _)| t.edge.left + t.edge.right > 0).count();
        let left = trajs.iter().map(|(t, _, _)| t.edge.left).sum();
        let right = trajs.iter().map(|(t, _, _)| t.edge.right).sum();
        report.warnings.extend(edge_warning(n, touched, cfg.replicas, left, right));
        for (r, (traj, seed, ok)) in trajs.iter().enumerate() {
            ledger_ok &= ok;
            report.rows.extend(traj.to_rows((k * cfg.replicas + r) as u64, *seed));
        }
    }
    report.verdicts.push(Verdict::new(
        "simulate:ledger",
        ledger_ok,
        "left mass + X and the exclusion particle count are constant at every recorded time",
    ));
    report.summary = serde_json::json!({ "N": cfg.n, "replicas": cfg.replicas, "T": cfg.t, "rb": cfg.rb });
    Ok(report)
}

/// Solves the dissipative, exclusion and full-line equations for the config and
/// writes profile CSVs, `t,a,v` series and JSON grid sidecars into `dir`.
pub fn solve_to_dir(cfg: &ExperimentConfig, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    cfg.validate()?;
    std::fs::create_dir_all(dir)?;
    let schedule = cfg.schedule();
    let l = cfg.domain_half_width();
    let mut written = Vec::new();
    let mut put = |name: &str| {
        let p = dir.join(name);
        written.push(p.clone());
        p
    };
    let rho = solve_dissipative(&cfg.rho0, &Grid::stable(-l, 0.0, cfg.du, cfg.t)?.with_snapshots(&schedule))?;
    write_profiles_csv(&rho.profiles, &put("rho.csv"))?;
    write_series_csv(&rho, &put("rho_series.csv"))?;
    write_sidecar(&rho, &put("rho.json"))?;
    let zeta = solve_exclusion_pde(&cfg.zeta0, &rho.a_series, &Grid::stable(0.0, l, cfg.du, cfg.t)?.with_snapshots(&schedule))?;
    write_profiles_csv(&zeta.profiles, &put("zeta.csv"))?;
    write_sidecar(&zeta, &put("zeta.json"))?;
    let (rho0, right) = fullline_initial(cfg)?;
    let full = solve_fullline_zr_pde(&rho0, &Grid::stable(-l, right, cfg.du, cfg.t)?.with_snapshots(&schedule))?;
    write_profiles_csv(&full.profiles, &put("fullline.csv"))?;
    write_series_csv(&full, &put("fullline_series.csv"))?;
    write_sidecar(&full, &put("fullline.json"))?;
    let lambda: Vec<_> = full.profiles.iter().map(integrate_lambda).collect();
    write_profiles_csv(&lambda, &put("lambda.csv"))?;
    Ok(written)
}
