//! Experiments: configuration, replica orchestration, statistics and reports.
//!
//! Each experiment is a pure function of its [`ExperimentConfig`]. Replica `r`
//! at position `k` of the N list uses seed `seed + k * replicas + r`; replicas
//! run on a rayon pool and are reduced in index order, so reports do not depend
//! on the worker count.

mod checks;
mod config;
mod dictionary;
mod front;
mod hydro;
mod replicas;
mod report;
mod simulate;
mod stats;

pub use checks::{
    run_coupling_experiment, run_potts_check, run_stationarity_experiment, CouplingAtN, CouplingSummary,
    PottsCheckSummary, StationarityAtN, StationaritySummary, STATIONARITY_LEVEL,
};
pub use config::{DictionaryConfig, ExperimentConfig, ExperimentKind, Observable};
pub use dictionary::{default_dictionary, dictionary_for};
pub use front::{run_flux_experiment, run_front_experiment, FluxAtN, FluxReport, FrontAtN, FrontReport};
pub use hydro::{
    fullline_initial, reference_fields, run_hydro_experiment, BlockSensitivity, ConvergenceReport, DistanceAtN,
    ObservableConvergence, ReferenceFields,
};
pub use replicas::{half_line_sites, map_replicas, replica_seed, sample_coupled};
pub use report::{emit_report, Report, ReportFiles, Verdict};
pub use simulate::{run_simulation, solve_to_dir};
pub use stats::{chi_square_test, strictly_decreasing, ChiSquareTest, Summary, Z95, Z95_ONE_SIDED};

/// Runs the experiment named by `cfg.kind` and returns its report.
pub fn run_experiment(cfg: &ExperimentConfig) -> crate::Result<Report> {
    match cfg.kind {
        ExperimentKind::HydroExclusion | ExperimentKind::HydroZr | ExperimentKind::PottsProfile => {
            run_hydro_experiment(cfg)?.into_report()
        }
        ExperimentKind::Front => run_front_experiment(cfg)?.into_report(),
        ExperimentKind::Flux => run_flux_experiment(cfg)?.into_report(),
        ExperimentKind::Coupling => run_coupling_experiment(cfg)?.into_report(),
        ExperimentKind::Stationarity => run_stationarity_experiment(cfg)?.into_report(),
    }
}
