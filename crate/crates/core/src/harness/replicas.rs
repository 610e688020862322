use rayon::prelude::*;

use super::config::ExperimentConfig;
use crate::lattice::CoupledConfig;
use crate::measures::{rng_for, sample_exclusion_initial, sample_zr_initial, Stream};
use crate::{Error, Result};

/// Seed of replica `r` at position `k` of the N list.
pub fn replica_seed(cfg: &ExperimentConfig, k: usize, r: usize) -> u64 {
    cfg.seed.wrapping_add((k * cfg.replicas + r) as u64)
}

/// Number of lattice sites in a truncated half-line at scale `n`.
pub fn half_line_sites(cfg: &ExperimentConfig, n: u32) -> usize {
    (cfg.domain_half_width() * n as f64).round() as usize
}

/// Local-equilibrium initial state: `η` on `[-LN, 0]` from `rho0` and `ξ` on
/// `[1, LN]` from `zeta0`, drawn from independent streams of `seed`.
pub fn sample_coupled(cfg: &ExperimentConfig, n: u32, seed: u64) -> Result<CoupledConfig> {
    let sites = half_line_sites(cfg, n);
    let eta = sample_zr_initial(&cfg.rho0, n, -(sites as i64), 0, &mut rng_for(seed, Stream::Dissipative))?;
    let xi = sample_exclusion_initial(&cfg.zeta0, n, sites, &mut rng_for(seed, Stream::Exclusion))?;
    CoupledConfig::new(eta, xi)
}

/// Runs `f(0..count)` across the worker pool and returns results in index order.
pub fn map_replicas<T, F>(workers: Option<usize>, count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    let job = || (0..count).into_par_iter().map(&f).collect::<Result<Vec<T>>>();
    match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::Config(format!("cannot start {w} workers: {e}")))?
            .install(job),
        None => job(),
    }
}

/// One warning line per N summarising edge activity across replicas.
pub fn edge_warning(n: u32, touched: usize, replicas: usize, left: u64, right: u64) -> Option<String> {
    (touched > 0).then(|| {
        format!(
            "N={n}: truncation edge activity in {touched}/{replicas} replicas ({left} moves at the left edge, {right} at the right edge in total)"
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::ExperimentKind;

    #[test]
    fn results_come_back_in_order() {
        let out = map_replicas(Some(3), 50, |i| Ok(i * i)).unwrap();
        assert_eq!(out, (0..50).map(|i| i * i).collect::<Vec<_>>());
        let err = map_replicas(None, 5, |i| if i == 3 { Err(Error::Validation("x".into())) } else { Ok(i) });
        assert!(err.is_err());
    }

    #[test]
    fn seeds_are_distinct_across_n() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::Front);
        cfg.replicas = 4;
        let seeds: Vec<u64> = (0..3).flat_map(|k| (0..4).map(move |r| (k, r))).map(|(k, r)| replica_seed(&cfg, k, r)).collect();
        let mut s = seeds.clone();
        s.dedup();
        assert_eq!(s.len(), 12);
        assert_eq!(seeds[0], cfg.seed);
    }

    #[test]
    fn sampled_state_spans_both_half_lines() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::HydroExclusion);
        cfg.domain = Some(2.0);
        let c = sample_coupled(&cfg, 10, 3).unwrap();
        assert_eq!(c.eta().lo(), -20);
        assert_eq!(c.xi().len(), 20);
        assert_eq!(sample_coupled(&cfg, 10, 3).unwrap(), c);
    }
}
