//! Continuous-time simulation of the coupled generator and its variants.
//!
//! All times handed in and out are macroscopic: the generator is sped up by
//! `N^2`, so a waiting time drawn at total microscopic rate `R` is `Exp(1)/(N^2 R)`.
//! The exclusion box grows by one empty site at every boundary event, so the
//! particle count on the right is conserved exactly.

mod coupled;
mod coupling;
mod indexed_set;
mod lockstep;
mod potts;
mod rates;
mod trajectory;

pub use coupled::{run, run_reflected_zr, step, CoupledProcess, RunParams};
pub use coupling::{
    run_coupled_pair, run_zr_comparison, ComparisonReport, CouplingMode, CouplingReport, CrossingSets,
};
pub use lockstep::{drive_lockstep, LockstepReport, ZrKernel};
pub use potts::{run_potts_surface, PottsProcess};
pub use rates::{build_event_table, g, Channel, RateTable};
pub use trajectory::{EdgeActivity, EventCounts, Observables, Row, Snapshot, Trajectory};
