//! Simulation and hydrodynamic-limit tooling for the zero-temperature three-state
//! Potts interface, its zero-range increment process with an asymmetric origin,
//! and the coupled dissipative zero-range / exclusion process obtained from it
//! through the Kipnis gap transform.
//!
//! * [`lattice`]: configuration types and the exact transforms between the
//!   surface, increment and exclusion pictures, including the flip rule table.
//! * [`measures`]: local-equilibrium initial samplers, test functions and
//!   empirical pairings.
//! * [`engine`]: exact continuous-time simulation of all the kernels, plus the
//!   basic and stirring couplings.
//! * [`pde`]: explicit conservative solvers for the limiting equations and the
//!   transforms between them.
//! * [`harness`]: experiment configuration, replica orchestration, statistics
//!   and report output used by the command line tool.

pub mod engine;
pub mod error;
pub mod harness;
pub mod lattice;
pub mod measures;
pub mod pde;

pub use error::{Error, Result};
