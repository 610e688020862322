//! Explicit finite-volume solvers for the limiting equations.
//!
//! * `∂ρ = ½ ΔΦ(ρ)` on the negative half-line with `ρ(t, 0) = 0`, where the
//!   boundary mass flux `a_t` and the leaked mass `v_t = ∫_0^t a_s ds` are read
//!   off the discrete mass ledger.
//! * `∂ζ = ½ Δζ - a_t ∂ζ` on the positive half-line with zero total flux at
//!   the origin, `½ ∂ζ(t, 0+) = a_t ζ(t, 0+)`.
//! * The full-line zero-range equation: the right half receives the flux lost
//!   by the left half.
//!
//! Fields are stored at fixed snapshot times together with the time integrals
//! of the discrete face fluxes, which is what the weak-form residuals consume.

mod io;
mod residual;
mod solvers;
mod transform;

pub use io::{write_profiles_csv, write_series_csv, write_sidecar, Sidecar};
pub use residual::{trace_residual, v_truncated, weak_form_residual};
pub use solvers::{solve_dissipative, solve_exclusion_pde, solve_fullline_zr_pde};
pub use transform::{integrate_lambda, rho_from_zeta, transform_zeta_to_rho};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `Φ(ρ) = ρ / (1 + ρ)`.
pub fn phi(rho: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::Domain(format!("Φ is defined for ρ ≥ 0, got {rho}")));
    }
    Ok(rho / (1.0 + rho))
}

/// `Φ'(ρ) = 1 / (1 + ρ)^2`.
pub fn phi_prime(rho: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::Domain(format!("Φ' is defined for ρ ≥ 0, got {rho}")));
    }
    Ok(1.0 / ((1.0 + rho) * (1.0 + rho)))
}

/// Space-time grid shared by all solvers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub du: f64,
    pub dt: f64,
    pub t_max: f64,
    /// Times at which profiles are stored; `0` and `t_max` are always added.
    #[serde(default)]
    pub snapshots: Vec<f64>,
}

/// Fraction of `Δu²` used by [`Grid::stable`].
pub const STABLE_FRACTION: f64 = 0.6;

impl Grid {
    pub fn new(lo: f64, hi: f64, du: f64, dt: f64, t_max: f64) -> Result<Self> {
        if !(du > 0.0) || !(dt > 0.0) || !(hi > lo) || !(t_max >= 0.0) {
            return Err(Error::Config(format!(
                "invalid grid: [{lo}, {hi}], du = {du}, dt = {dt}, T = {t_max}"
            )));
        }
        let cells = (hi - lo) / du;
        if (cells - cells.round()).abs() > 1e-6 * cells.max(1.0) {
            return Err(Error::Config(format!("domain length {} is not a multiple of du = {du}", hi - lo)));
        }
        let steps = t_max / dt;
        if (steps - steps.round()).abs() > 1e-6 * steps.max(1.0) {
            return Err(Error::Config(format!("horizon {t_max} is not a multiple of dt = {dt}")));
        }
        Ok(Self { lo, hi, du, dt, t_max, snapshots: Vec::new() })
    }

    /// Grid with `dt ≈ 0.6 Δu²` adjusted so that `T / dt` is an integer; this
    /// meets the stability bounds of every solver here.
    pub fn stable(lo: f64, hi: f64, du: f64, t_max: f64) -> Result<Self> {
        let target = STABLE_FRACTION * du * du;
        let steps = (t_max / target).ceil().max(1.0);
        let dt = if t_max > 0.0 { t_max / steps } else { target };
        Self::new(lo, hi, du, dt, t_max)
    }

    pub fn with_snapshots(mut self, times: &[f64]) -> Self {
        self.snapshots = times.to_vec();
        self
    }

    pub fn cells(&self) -> usize {
        ((self.hi - self.lo) / self.du).round() as usize
    }

    pub fn steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }

    /// Step indices at which snapshots are taken, sorted and unique.
    pub(crate) fn snapshot_steps(&self) -> Vec<usize> {
        let mut ks: Vec<usize> = self
            .snapshots
            .iter()
            .filter(|t| (0.0..=self.t_max + 1e-12).contains(*t))
            .map(|t| (t / self.dt).round() as usize)
            .chain([0, self.steps()])
            .collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    pub fn check_rho_cfl(&self) -> Result<()> {
        let limit = 0.9 * self.du * self.du;
        if self.dt > limit {
            return Err(Error::Cfl { dt: self.dt, limit });
        }
        Ok(())
    }

    pub fn check_zeta_cfl(&self, sup_a: f64) -> Result<()> {
        let limit = 0.9 * self.du * self.du / (1.0 + sup_a.abs() * self.du);
        if self.dt > limit {
            return Err(Error::Cfl { dt: self.dt, limit });
        }
        Ok(())
    }
}

/// A field sampled at nodes `u` (nondecreasing; a repeated node marks a jump).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub t: f64,
    pub u: Vec<f64>,
    pub values: Vec<f64>,
}

impl Profile {
    pub fn new(t: f64, u: Vec<f64>, values: Vec<f64>) -> Self {
        debug_assert_eq!(u.len(), values.len());
        Self { t, u, values }
    }

    /// Linear interpolation, constant beyond the end nodes. At a repeated node
    /// the left value wins.
    pub fn eval(&self, x: f64) -> f64 {
        let u = &self.u;
        let n = u.len();
        if n == 0 {
            return 0.0;
        }
        if x <= u[0] {
            return self.values[0];
        }
        if x >= u[n - 1] {
            return self.values[n - 1];
        }
        let k = u.partition_point(|&v| v < x);
        let (ua, ub) = (u[k - 1], u[k]);
        if ub == ua {
            return self.values[k];
        }
        let s = (x - ua) / (ub - ua);
        self.values[k - 1] + s * (self.values[k] - self.values[k - 1])
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.u.first().copied().unwrap_or(0.0), self.u.last().copied().unwrap_or(0.0))
    }

    /// Trapezoid integral over the nodes.
    pub fn integral(&self) -> f64 {
        self.u.windows(2).zip(self.values.windows(2)).map(|(u, v)| 0.5 * (u[1] - u[0]) * (v[0] + v[1])).sum()
    }

    /// `∫_a^b |p - q|` on a uniform sample of `m` panels, trapezoid rule.
    pub fn l1_distance(&self, other: &Profile, a: f64, b: f64, m: usize) -> f64 {
        let h = (b - a) / m as f64;
        (0..=m)
            .map(|i| {
                let x = a + i as f64 * h;
                let w = if i == 0 || i == m { 0.5 } else { 1.0 };
                w * (self.eval(x) - other.eval(x)).abs()
            })
            .sum::<f64>()
            * h
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolutionKind {
    Dissipative,
    Exclusion,
    FullLine,
}

/// Time integrals `∫_0^t` of per-face quantities up to a snapshot.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FaceIntegrals {
    /// Face gradients: `∂Φ(ρ)` for ρ, `∂ζ` for ζ.
    pub grad: Vec<f64>,
    /// `a_s ζ_up` at each ζ face.
    pub drift: Vec<f64>,
    /// `ζ` per cell, for the trace condition.
    pub cell: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdeSolution {
    pub kind: SolutionKind,
    pub grid: Grid,
    pub profiles: Vec<Profile>,
    /// Per time step `n` (state at `t = n dt`), `n = 0..=steps`.
    pub a_series: Vec<f64>,
    /// `v_n = Σ_{m<n} a_m dt`.
    pub v_series: Vec<f64>,
    pub mass: Vec<f64>,
    /// One entry per profile.
    pub faces: Vec<FaceIntegrals>,
    /// Quadrature weights of the profile nodes (the discrete mass is `Σ w ρ`).
    pub weights: Vec<f64>,
}

impl PdeSolution {
    pub fn times(&self) -> Vec<f64> {
        self.profiles.iter().map(|p| p.t).collect()
    }

    /// Profile stored nearest to `t`.
    pub fn profile_at(&self, t: f64) -> &Profile {
        self.profiles
            .iter()
            .min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))
            .expect("at least the initial profile is stored")
    }

    pub fn index_at(&self, t: f64) -> usize {
        self.profiles
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.t - t).abs().total_cmp(&(b.1.t - t).abs()))
            .map(|(i, _)| i)
            .expect("at least the initial profile is stored")
    }

    /// `v` at the step nearest to `t`.
    pub fn v_at(&self, t: f64) -> f64 {
        let n = ((t / self.grid.dt).round() as usize).min(self.v_series.len() - 1);
        self.v_series[n]
    }

    pub fn a_at(&self, t: f64) -> f64 {
        let n = ((t / self.grid.dt).round() as usize).min(self.a_series.len() - 1);
        self.a_series[n]
    }

    /// Discrete mass `Σ w_j x_j` of a stored profile.
    pub fn discrete_mass(&self, index: usize) -> f64 {
        self.weights.iter().zip(&self.profiles[index].values).map(|(w, x)| w * x).sum()
    }
}
