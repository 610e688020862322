use super::{FaceIntegrals, Grid, PdeSolution, Profile, SolutionKind};
use crate::measures::ProfileSpec;
use crate::{Error, Result};

const RANGE_SLACK: f64 = 1e-9;

fn phi_raw(r: f64) -> f64 {
    r / (1.0 + r)
}

/// Vertex-centred ρ on `[lo, 0]`: node `J` sits at the origin with `ρ = 0`, the
/// left node owns a half control volume behind a zero-flux wall.
struct LeftHalf {
    rho: Vec<f64>,
    weights: Vec<f64>,
    phi: Vec<f64>,
    grad: Vec<f64>,
    du: f64,
}

impl LeftHalf {
    fn new(rho0: &ProfileSpec, grid: &Grid) -> Result<Self> {
        let j = ((0.0 - grid.lo) / grid.du).round() as usize;
        if j < 2 {
            return Err(Error::Config("dissipative domain needs at least two cells".into()));
        }
        rho0.validate_density(grid.lo, 0.0)?;
        let mut rho: Vec<f64> = (0..=j).map(|k| rho0.eval(grid.lo + k as f64 * grid.du)).collect();
        rho[j] = 0.0;
        let mut weights = vec![grid.du; j + 1];
        weights[0] = 0.5 * grid.du;
        weights[j] = 0.5 * grid.du;
        Ok(Self { rho, weights, phi: vec![0.0; j + 1], grad: vec![0.0; j], du: grid.du })
    }

    fn nodes(&self, lo: f64) -> Vec<f64> {
        (0..self.rho.len()).map(|k| lo + k as f64 * self.du).collect()
    }

    fn mass(&self) -> f64 {
        self.weights.iter().zip(&self.rho).map(|(w, r)| w * r).sum()
    }

    /// Fills the face gradients of `Φ(ρ)` and returns the outgoing flux at 0.
    fn fluxes(&mut self) -> f64 {
        for (p, &r) in self.phi.iter_mut().zip(&self.rho) {
            *p = phi_raw(r);
        }
        for (k, g) in self.grad.iter_mut().enumerate() {
            *g = (self.phi[k + 1] - self.phi[k]) / self.du;
        }
        -0.5 * self.grad.last().copied().unwrap_or(0.0)
    }

    fn update(&mut self, dt: f64) -> Result<()> {
        let j = self.rho.len() - 1;
        for k in 0..j {
            let right = 0.5 * self.grad[k];
            let left = if k == 0 { 0.0 } else { 0.5 * self.grad[k - 1] };
            self.rho[k] += dt / self.weights[k] * (right - left);
            if self.rho[k] < -RANGE_SLACK {
                return Err(Error::SchemeFailure(format!("ρ became negative ({}) at node {k}", self.rho[k])));
            }
        }
        Ok(())
    }
}

/// Vertex-centred ρ on `[0, hi]` with half control volumes at both ends; mass
/// enters at the origin node.
struct RightHalf {
    rho: Vec<f64>,
    weights: Vec<f64>,
    phi: Vec<f64>,
    grad: Vec<f64>,
    du: f64,
}

impl RightHalf {
    fn new(rho0: &ProfileSpec, grid: &Grid) -> Result<Self> {
        let k = (grid.hi / grid.du).round() as usize;
        if k < 2 {
            return Err(Error::Config("right domain needs at least two cells".into()));
        }
        rho0.validate_density(0.0, grid.hi)?;
        let rho: Vec<f64> = (0..=k).map(|i| rho0.eval(i as f64 * grid.du)).collect();
        let mut weights = vec![grid.du; k + 1];
        weights[0] = 0.5 * grid.du;
        weights[k] = 0.5 * grid.du;
        Ok(Self { rho, weights, phi: vec![0.0; k + 1], grad: vec![0.0; k], du: grid.du })
    }

    fn mass(&self) -> f64 {
        self.weights.iter().zip(&self.rho).map(|(w, r)| w * r).sum()
    }

    fn update(&mut self, dt: f64, inflow: f64) -> Result<()> {
        for (p, &r) in self.phi.iter_mut().zip(&self.rho) {
            *p = phi_raw(r);
        }
        for (k, g) in self.grad.iter_mut().enumerate() {
            *g = (self.phi[k + 1] - self.phi[k]) / self.du;
        }
        let last = self.rho.len() - 1;
        for k in 0..=last {
            let right = if k == last { 0.0 } else { 0.5 * self.grad[k] };
            let left = if k == 0 { -inflow } else { 0.5 * self.grad[k - 1] };
            self.rho[k] += dt / self.weights[k] * (right - left);
            if self.rho[k] < -RANGE_SLACK {
                return Err(Error::SchemeFailure(format!("ρ became negative ({}) at right node {k}", self.rho[k])));
            }
        }
        Ok(())
    }
}

/// Solves `∂ρ = ½ΔΦ(ρ)` on `[grid.lo, 0]` with `ρ(t, 0) = 0` and a reflecting
/// left edge. `a_n` is the outgoing flux `-½ ∂Φ` across the last face, so
/// `v_n = Σ a dt` equals the mass lost exactly.
pub fn solve_dissipative(rho0: &ProfileSpec, grid: &Grid) -> Result<PdeSolution> {
    if grid.hi != 0.0 {
        return Err(Error::Config(format!("dissipative domain must end at 0, got hi = {}", grid.hi)));
    }
    grid.check_rho_cfl()?;
    let mut left = LeftHalf::new(rho0, grid)?;
    let nodes = left.nodes(grid.lo);
    let steps = grid.steps();
    let snaps = grid.snapshot_steps();
    let mut next = 0;
    let mut a_series = Vec::with_capacity(steps + 1);
    let mut v_series = Vec::with_capacity(steps + 1);
    let mut mass = Vec::with_capacity(steps + 1);
    let mut profiles = Vec::new();
    let mut faces = Vec::new();
    let mut grad_int = vec![0.0; left.grad.len()];
    let mut v = 0.0;
    for n in 0..=steps {
        let a = left.fluxes();
        a_series.push(a);
        v_series.push(v);
        mass.push(left.mass());
        if next < snaps.len() && snaps[next] == n {
            profiles.push(Profile::new(n as f64 * grid.dt, nodes.clone(), left.rho.clone()));
            faces.push(FaceIntegrals { grad: grad_int.clone(), ..Default::default() });
            next += 1;
        }
        if n == steps {
            break;
        }
        for (acc, g) in grad_int.iter_mut().zip(&left.grad) {
            *acc += grid.dt * g;
        }
        left.update(grid.dt)?;
        v += a * grid.dt;
    }
    Ok(PdeSolution {
        kind: SolutionKind::Dissipative,
        grid: grid.clone(),
        profiles,
        a_series,
        v_series,
        mass,
        faces,
        weights: left.weights,
    })
}

/// Solves `∂ζ = ∂(½∂ζ - a_t ζ)` on `[0, grid.hi]` by cell-centred finite volumes
/// with upwind drift and zero flux through both ends. `a_series[n]` is the drift
/// during step `n`.
pub fn solve_exclusion_pde(zeta0: &ProfileSpec, a_series: &[f64], grid: &Grid) -> Result<PdeSolution> {
    if grid.lo != 0.0 {
        return Err(Error::Config(format!("exclusion domain must start at 0, got lo = {}", grid.lo)));
    }
    let steps = grid.steps();
    if a_series.len() < steps {
        return Err(Error::Config(format!("need {steps} drift values, got {}", a_series.len())));
    }
    let sup_a = a_series[..steps].iter().fold(0.0_f64, |m, a| m.max(a.abs()));
    grid.check_zeta_cfl(sup_a)?;
    let du = grid.du;
    let cells = grid.cells();
    if cells < 2 {
        return Err(Error::Config("exclusion domain needs at least two cells".into()));
    }
    let centers: Vec<f64> = (0..cells).map(|j| (j as f64 + 0.5) * du).collect();
    zeta0.validate_exclusion(centers[0], centers[cells - 1])?;
    let mut zeta: Vec<f64> = centers.iter().map(|&u| zeta0.eval(u)).collect();
    let mut flux = vec![0.0; cells - 1];
    let mut grad = vec![0.0; cells - 1];
    let mut grad_int = vec![0.0; cells - 1];
    let mut drift_int = vec![0.0; cells - 1];
    let mut cell_int = vec![0.0; cells];
    let snaps = grid.snapshot_steps();
    let mut next = 0;
    let mut profiles = Vec::new();
    let mut faces = Vec::new();
    let mut mass: Vec<f64> = Vec::with_capacity(steps + 1);
    let mut series = Vec::with_capacity(steps + 1);
    for n in 0..=steps {
        let m = du * zeta.iter().sum::<f64>();
        if let Some(&prev) = mass.last() {
            if (m - prev).abs() > 1e-12 * prev.max(1.0) {
                return Err(Error::SchemeFailure(format!("∫ζ drifted by {:e} in step {n}", m - prev)));
            }
        }
        mass.push(m);
        series.push(if n < steps { a_series[n] } else { a_series.get(n).copied().unwrap_or(0.0) });
        if next < snaps.len() && snaps[next] == n {
            profiles.push(Profile::new(n as f64 * grid.dt, centers.clone(), zeta.clone()));
            faces.push(FaceIntegrals { grad: grad_int.clone(), drift: drift_int.clone(), cell: cell_int.clone() });
            next += 1;
        }
        if n == steps {
            break;
        }
        let a = a_series[n];
        for f in 0..cells - 1 {
            let up = if a >= 0.0 { zeta[f] } else { zeta[f + 1] };
            grad[f] = (zeta[f + 1] - zeta[f]) / du;
            flux[f] = a * up - 0.5 * grad[f];
            grad_int[f] += grid.dt * grad[f];
            drift_int[f] += grid.dt * a * up;
        }
        for (acc, z) in cell_int.iter_mut().zip(&zeta) {
            *acc += grid.dt * z;
        }
        for j in 0..cells {
            let right = if j + 1 < cells { flux[j] } else { 0.0 };
            let left = if j > 0 { flux[j - 1] } else { 0.0 };
            zeta[j] -= grid.dt / du * (right - left);
            if zeta[j] < -RANGE_SLACK || zeta[j] > 1.0 + RANGE_SLACK {
                return Err(Error::SchemeFailure(format!("ζ left [0, 1]: {} in cell {j}", zeta[j])));
            }
        }
    }
    let mut v_series = Vec::with_capacity(steps + 1);
    let mut v = 0.0;
    for &a in &series {
        v_series.push(v);
        v += a * grid.dt;
    }
    Ok(PdeSolution {
        kind: SolutionKind::Exclusion,
        grid: grid.clone(),
        profiles,
        a_series: series,
        v_series,
        mass,
        faces,
        weights: vec![du; cells],
    })
}

/// Full-line zero-range equation: the left half as in [`solve_dissipative`], the
/// right half `∂ρ = ½ΔΦ(ρ)` on `[0, grid.hi]` receiving the flux `a_t` at `0+`.
/// Profiles list the left nodes then the right nodes, so `u = 0` appears twice.
pub fn solve_fullline_zr_pde(rho0: &ProfileSpec, grid: &Grid) -> Result<PdeSolution> {
    if !(grid.lo < 0.0 && grid.hi > 0.0) {
        return Err(Error::Config(format!("full-line domain must contain 0 inside, got [{}, {}]", grid.lo, grid.hi)));
    }
    grid.check_rho_cfl()?;
    let mut left = LeftHalf::new(rho0, grid)?;
    let mut right = RightHalf::new(rho0, grid)?;
    let mut nodes = left.nodes(grid.lo);
    nodes.extend((0..right.rho.len()).map(|k| k as f64 * grid.du));
    let mut weights = left.weights.clone();
    weights.extend(&right.weights);
    let steps = grid.steps();
    let snaps = grid.snapshot_steps();
    let mut next = 0;
    let mut a_series = Vec::with_capacity(steps + 1);
    let mut v_series = Vec::with_capacity(steps + 1);
    let mut mass = Vec::with_capacity(steps + 1);
    let mut profiles = Vec::new();
    let mut v = 0.0;
    for n in 0..=steps {
        let a = left.fluxes();
        a_series.push(a);
        v_series.push(v);
        mass.push(left.mass() + right.mass());
        if next < snaps.len() && snaps[next] == n {
            let mut values = left.rho.clone();
            values.extend(&right.rho);
            profiles.push(Profile::new(n as f64 * grid.dt, nodes.clone(), values));
            next += 1;
        }
        if n == steps {
            break;
        }
        left.update(grid.dt)?;
        right.update(grid.dt, a)?;
        v += a * grid.dt;
    }
    let faces = vec![FaceIntegrals::default(); profiles.len()];
    Ok(PdeSolution { kind: SolutionKind::FullLine, grid: grid.clone(), profiles, a_series, v_series, mass, faces, weights })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_profile_stays_empty() {
        let grid = Grid::stable(-2.0, 0.0, 0.05, 0.5).unwrap();
        let s = solve_dissipative(&ProfileSpec::constant(0.0), &grid).unwrap();
        assert!(s.v_series.iter().all(|&v| v == 0.0));
        assert!(s.profiles.last().unwrap().values.iter().all(|&r| r == 0.0));
        let full = Grid::stable(-2.0, 2.0, 0.05, 0.5).unwrap();
        let s = solve_fullline_zr_pde(&ProfileSpec::constant(0.0), &full).unwrap();
        assert!(s.profiles.last().unwrap().values.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn ledger_identity_and_monotone_v() {
        let grid = Grid::stable(-3.0, 0.0, 0.02, 1.0).unwrap();
        let s = solve_dissipative(&ProfileSpec::bump(0.2, 0.8, -1.0, 0.7), &grid).unwrap();
        let m0 = s.mass[0];
        for (m, v) in s.mass.iter().zip(&s.v_series) {
            assert!((m0 - m - v).abs() < 1e-12);
        }
        assert!(s.v_series.windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(s.v_series[0], 0.0);
    }

    #[test]
    fn zeta_constant_is_fixed_point() {
        let grid = Grid::stable(0.0, 1.0, 0.05, 0.5).unwrap();
        let a = vec![0.0; grid.steps() + 1];
        let s = solve_exclusion_pde(&ProfileSpec::constant(0.4), &a, &grid).unwrap();
        assert!(s.profiles.last().unwrap().values.iter().all(|&z| (z - 0.4).abs() < 1e-14));
    }

    #[test]
    fn too_large_step_is_rejected() {
        let grid = Grid::new(-1.0, 0.0, 0.1, 0.0095, 0.95).unwrap();
        assert!(matches!(solve_dissipative(&ProfileSpec::constant(0.1), &grid), Err(Error::Cfl { .. })));
        let zg = Grid::new(0.0, 1.0, 0.1, 0.008, 0.8).unwrap();
        assert!(matches!(
            solve_exclusion_pde(&ProfileSpec::constant(0.5), &vec![2.0; 101], &zg),
            Err(Error::Cfl { .. })
        ));
    }

    #[test]
    fn fullline_conserves_total_mass() {
        let grid = Grid::stable(-3.0, 3.0, 0.025, 1.0).unwrap();
        let s = solve_fullline_zr_pde(&ProfileSpec::step(0.5, 1.0, 0.0), &grid).unwrap();
        let m0 = s.mass[0];
        assert!(s.mass.iter().all(|m| (m - m0).abs() < 1e-10));
        assert!(s.v_series.last().unwrap() > &0.0);
    }
}
