use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use interface_hydro::harness::{
    emit_report, run_coupling_experiment, run_flux_experiment, run_front_experiment, run_hydro_experiment,
    run_potts_check, run_simulation, run_stationarity_experiment, solve_to_dir, ExperimentConfig, ExperimentKind,
    Report,
};

const CONFIG_HELP: &str = "\
Config file keys (TOML) and defaults:
  kind            hydro-exclusion | hydro-zr | potts-profile | front | flux | coupling | stationarity
                  (default: the one matching the subcommand)
  N               list of scaling parameters, strictly increasing    [64, 128, 256]
  T               macroscopic horizon                                0.5
  replicas        replicas per N                                     20
  seed            base seed; replica r at list position k uses seed + k*replicas + r    1
  rb              boundary rate coefficient                          1
  [rho0]          zero-range initial profile (alias [profile]):      kind = \"constant\", params = [0.5]
                  kind is constant | step | bump | linear-ramp | table; optional support = [lo, hi];
                  a table may give path = \"file.csv\" with (u, value) rows
  [zeta0]         exclusion initial profile, values in (0, 1]        constant 0.5
  times           observation times                                  [T/2, T]
  du              PDE grid spacing                                   0.005
  support_radius  radius R of the test-function dictionary           1
  domain          truncation half-width L                            4 (sqrt(T) + R), rounded up to du
  observables     any of xi, eta, full, interface                    by kind: xi / eta, full / interface
  [dictionary]    per-observable test function lists replacing the defaults
  block_eps       block width for coarse-grained densities           0.05
  tolerance       distance tolerance of the hydro verdicts           0.08
  coupling_low    lower Bernoulli density of the coupled pair        0.3
  coupling_high   upper Bernoulli density                            0.7
  alpha           product measure parameter for stationarity         1
  workers         worker threads                                     rayon default
  out             output directory                                   out";

#[derive(Parser, Debug)]
#[command(name = "interface-hydro", version, about = "Potts interface, zero-range and exclusion simulations with their limiting PDEs", after_help = CONFIG_HELP)]
struct Cli {
    /// Experiment config file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base seed, overriding the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory, overriding the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads, overriding the config.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Boundary rate coefficient (1 or 0.5), overriding the config.
    #[arg(long, global = true)]
    rb: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Run the coupled process and write every observable.
    Simulate,
    /// Solve the limiting equations and write the profiles.
    Solve,
    /// Hydrodynamic convergence (kinds hydro-exclusion, hydro-zr, potts-profile).
    Hydro,
    /// Front position X_T/N against v_T.
    Front,
    /// Boundary flux bound and replacement.
    Flux,
    /// Order preservation under the basic and stirring couplings.
    Couple,
    /// Lockstep check of the flip dynamics against the coupled process.
    PottsCheck,
    /// Stationarity of the reflected zero-range process.
    Stationarity,
}

impl Command {
    fn default_kind(self) -> ExperimentKind {
        match self {
            Self::Hydro | Self::Simulate | Self::Solve | Self::PottsCheck => ExperimentKind::HydroExclusion,
            Self::Front => ExperimentKind::Front,
            Self::Flux => ExperimentKind::Flux,
            Self::Couple => ExperimentKind::Coupling,
            Self::Stationarity => ExperimentKind::Stationarity,
        }
    }

    fn accepts(self, kind: ExperimentKind) -> bool {
        match self {
            Self::Hydro => kind.is_hydro(),
            Self::Simulate | Self::Solve | Self::PottsCheck => true,
            _ => kind == self.default_kind(),
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path).with_context(|| format!("reading {}", path.display()))?,
        None => ExperimentConfig::new(cli.command.default_kind()),
    };
    if !cli.command.accepts(cfg.kind) {
        bail!("config kind {} does not match the {:?} subcommand", cfg.kind.name(), cli.command);
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    if let Some(w) = cli.workers {
        cfg.workers = Some(w);
    }
    if let Some(rb) = cli.rb {
        cfg.rb = rb;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn print_report(report: &Report) {
    for v in &report.verdicts {
        println!("{} {}: {}", if v.passed { "PASS" } else { "FAIL" }, v.name, v.detail);
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    let cfg = load_config(&cli)?;
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let report = match cli.command {
        Command::Solve => {
            for path in solve_to_dir(&cfg, &out)? {
                println!("{}", path.display());
            }
            return Ok(ExitCode::SUCCESS);
        }
        Command::Simulate => run_simulation(&cfg)?,
        Command::Hydro => run_hydro_experiment(&cfg)?.into_report()?,
        Command::Front => run_front_experiment(&cfg)?.into_report()?,
        Command::Flux => run_flux_experiment(&cfg)?.into_report()?,
        Command::Couple => run_coupling_experiment(&cfg)?.into_report()?,
        Command::PottsCheck => run_potts_check(&cfg)?.into_report()?,
        Command::Stationarity => run_stationarity_experiment(&cfg)?.into_report()?,
    };
    let files = emit_report(&report, &out)?;
    print_report(&report);
    println!("wrote {} and {}", files.csv.display(), files.json.display());
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
