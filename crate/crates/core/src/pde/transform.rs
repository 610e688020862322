use super::{PdeSolution, Profile, SolutionKind};
use crate::{Error, Result};

/// Gap density seen from an exclusion density: with `M(A) = ∫_0^A ζ`,
/// `ρ(u) = 1/ζ(M⁻¹(u)) - 1` at each of `u_out` (which must lie in `[0, M(end)]`).
///
/// The cell values of `ζ` are extended to `u = 0` by the first value, `M` is the
/// cumulative trapezoid integral over those points and `M⁻¹` is piecewise linear.
pub fn rho_from_zeta(zeta: &Profile, u_out: &[f64]) -> Result<Vec<f64>> {
    if let Some(z) = zeta.values.iter().find(|&&z| !(z > 0.0)) {
        return Err(Error::Transform(format!("ζ must be strictly positive, found {z}")));
    }
    let mut xs = Vec::with_capacity(zeta.u.len() + 1);
    let mut zs = Vec::with_capacity(zeta.u.len() + 1);
    if zeta.u.first().is_some_and(|&u| u > 0.0) {
        xs.push(0.0);
        zs.push(zeta.values[0]);
    }
    xs.extend(&zeta.u);
    zs.extend(&zeta.values);
    let mut m = vec![0.0; xs.len()];
    for k in 1..xs.len() {
        m[k] = m[k - 1] + 0.5 * (xs[k] - xs[k - 1]) * (zs[k] + zs[k - 1]);
    }
    let top = *m.last().expect("nonempty profile");
    let mut out = Vec::with_capacity(u_out.len());
    for &u in u_out {
        if u < 0.0 || u > top * (1.0 + 1e-12) {
            return Err(Error::Transform(format!("u = {u} outside the range [0, {top}] of M")));
        }
        // M is strictly increasing, so the preimage interval is unique
        let k = m.partition_point(|&v| v < u).clamp(1, m.len() - 1);
        let s = ((u - m[k - 1]) / (m[k] - m[k - 1])).clamp(0.0, 1.0);
        let z = zs[k - 1] + s * (zs[k] - zs[k - 1]);
        out.push(1.0 / z - 1.0);
    }
    Ok(out)
}

/// Right-half ρ at every stored time of a ζ solution, on the nodes
/// `0, du_out, ..., ≤ u_max`.
pub fn transform_zeta_to_rho(solution: &PdeSolution, du_out: f64, u_max: f64) -> Result<Vec<Profile>> {
    if solution.kind != SolutionKind::Exclusion {
        return Err(Error::Transform("transform needs an exclusion solution".into()));
    }
    let count = (u_max / du_out + 1e-9).floor() as usize;
    let nodes: Vec<f64> = (0..=count).map(|k| k as f64 * du_out).collect();
    solution
        .profiles
        .iter()
        .map(|p| Ok(Profile::new(p.t, nodes.clone(), rho_from_zeta(p, &nodes)?)))
        .collect()
}

/// `λ(u) = ∫_0^u ρ` (negative for `u < 0`), cumulative trapezoid on the nodes
/// of `rho`. Repeated nodes contribute nothing, so a jump at the origin is fine.
pub fn integrate_lambda(rho: &Profile) -> Profile {
    let n = rho.u.len();
    let mut c = vec![0.0; n];
    for k in 1..n {
        c[k] = c[k - 1] + 0.5 * (rho.u[k] - rho.u[k - 1]) * (rho.values[k] + rho.values[k - 1]);
    }
    let cumulative = Profile::new(rho.t, rho.u.clone(), c.clone());
    let c0 = cumulative.eval(0.0);
    Profile::new(rho.t, rho.u.clone(), c.into_iter().map(|v| v - c0).collect())
}
