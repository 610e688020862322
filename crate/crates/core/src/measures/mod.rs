//! Initial local-equilibrium samplers, test functions and empirical pairings.
//!
//! Initial measures are product measures whose site parameter follows a
//! macroscopic profile: geometric marginals `ν̃_α` for the zero-range side and
//! Bernoulli marginals for the exclusion side. Product measures with bounded
//! parameters have relative entropy linear in the volume with respect to any
//! fixed reference product measure, so no entropy bound is checked numerically.
//! The dissipative and exclusion samplers draw from separate RNG streams so the
//! two halves are independent.

mod empirical;
mod profile;
mod sampler;
mod test_function;

pub use empirical::{block_density, empirical_pairing, interface_pairing, EmpiricalRecord, LatticeField};
pub use profile::{ProfileKind, ProfileSpec};
pub use sampler::{nu_tilde_pmf, rng_for, sample_exclusion_initial, sample_nu_tilde, sample_zr_initial, Stream};
pub use test_function::{Side, TestFunction, TestKind};

/// Default block width for coarse-grained densities, in macroscopic units.
pub const DEFAULT_BLOCK_EPS: f64 = 0.05;
