use super::{PdeSolution, SolutionKind};
use crate::measures::TestFunction;
use crate::{Error, Result};

/// Difference of the two sides of the weak identity at the stored time nearest `t`,
/// for a time-independent `G`.
///
/// For ρ: `∫Gρ_t - ∫Gρ_0 = -½ ∫_0^t ∫ G' ∂Φ(ρ)`, with `G(0) = 0`.
/// For ζ: `∫Gζ_t - ∫Gζ_0 = ∫_0^t {-½ ∫ G' ∂ζ + a_s ∫ G' ζ}`.
///
/// Space integrals of the fields use the solver's own quadrature weights; the
/// flux side pairs the time-integrated face quantities with the analytic `G'`
/// taken at the left end of each face's stencil. The scheme satisfies the same
/// identity with `G'` replaced by difference quotients, so the residual is the
/// first-order gap between the two.
pub fn weak_form_residual(solution: &PdeSolution, g: &TestFunction, t: f64) -> Result<f64> {
    let idx = solution.index_at(t);
    let now = &solution.profiles[idx];
    let start = &solution.profiles[0];
    let du = solution.grid.du;
    let faces = &solution.faces[idx];
    let lhs: f64 = solution
        .weights
        .iter()
        .zip(&now.u)
        .zip(now.values.iter().zip(&start.values))
        .map(|((w, &u), (x, x0))| w * g.eval(u) * (x - x0))
        .sum();
    let rhs = match solution.kind {
        SolutionKind::Dissipative => {
            if g.eval(0.0).abs() > 1e-12 {
                return Err(Error::Precondition(format!("test function {} must vanish at the origin", g.id)));
            }
            -0.5 * faces.grad.iter().enumerate().map(|(j, i)| g.derivative(now.u[j]) * du * i).sum::<f64>()
        }
        SolutionKind::Exclusion => faces
            .grad
            .iter()
            .zip(&faces.drift)
            .enumerate()
            .map(|(j, (gr, dr))| g.derivative(now.u[j]) * du * (dr - 0.5 * gr))
            .sum(),
        SolutionKind::FullLine => {
            return Err(Error::Precondition("weak residual is defined for the half-line solutions".into()))
        }
    };
    Ok((lhs - rhs).abs())
}

/// Residual of the trace condition for ζ:
/// `∫_0^t ∫ G ∂ζ = -∫_0^t ∫ G' ζ - G(0) ∫_0^t ζ(s, 0+) ds`,
/// with the first cell average standing in for the boundary trace.
pub fn trace_residual(solution: &PdeSolution, g: &TestFunction, t: f64) -> Result<f64> {
    if solution.kind != SolutionKind::Exclusion {
        return Err(Error::Precondition("trace residual is defined for ζ solutions".into()));
    }
    let idx = solution.index_at(t);
    let faces = &solution.faces[idx];
    let centers = &solution.profiles[idx].u;
    let du = solution.grid.du;
    let lhs: f64 = faces.grad.iter().enumerate().map(|(f, i)| g.eval((f + 1) as f64 * du) * du * i).sum();
    let bulk: f64 = faces.cell.iter().zip(centers).map(|(z, &c)| g.derivative(c) * du * z).sum();
    let trace = g.eval(0.0) * faces.cell.first().copied().unwrap_or(0.0);
    Ok((lhs + bulk + trace).abs())
}

/// `∫ H_l(u) (ρ_0(u) - ρ(t, u)) du` over the negative half-line with
/// `H_l(u) = (1 + u/l)_+`, using the solver's quadrature weights.
pub fn v_truncated(solution: &PdeSolution, l: f64, t: f64) -> Result<f64> {
    if !(l > 0.0) {
        return Err(Error::Domain(format!("ramp length must be positive, got {l}")));
    }
    if solution.kind == SolutionKind::Exclusion {
        return Err(Error::Precondition("v is defined for ρ solutions".into()));
    }
    let idx = solution.index_at(t);
    let now = &solution.profiles[idx];
    let start = &solution.profiles[0];
    let end = now.u.iter().position(|&u| u >= 0.0).map_or(now.u.len(), |k| k + 1);
    Ok((0..end)
        .map(|j| {
            let h = (1.0 + now.u[j] / l).max(0.0);
            solution.weights[j] * h * (start.values[j] - now.values[j])
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{ProfileSpec, Side};
    use crate::pde::{solve_dissipative, solve_exclusion_pde, Grid};

    #[test]
    fn constant_zeta_without_drift_is_exact() {
        let grid = Grid::stable(0.0, 2.0, 0.05, 0.5).unwrap();
        let a = vec![0.0; grid.steps() + 1];
        let s = solve_exclusion_pde(&ProfileSpec::constant(0.3), &a, &grid).unwrap();
        for g in [TestFunction::bump("b", 0.6, 0.4), TestFunction::ramp("r", 1.0, Side::Positive)] {
            assert!(weak_form_residual(&s, &g, 0.5).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn rho_test_function_must_vanish_at_origin() {
        let grid = Grid::stable(-2.0, 0.0, 0.05, 0.1).unwrap();
        let s = solve_dissipative(&ProfileSpec::constant(0.5), &grid).unwrap();
        let g = TestFunction::ramp("h", 1.0, Side::Negative);
        assert!(weak_form_residual(&s, &g, 0.1).is_err());
    }

    #[test]
    fn truncated_v_is_monotone_and_converges() {
        let grid = Grid::stable(-4.0, 0.0, 0.02, 0.5).unwrap();
        let s = solve_dissipative(&ProfileSpec::constant(0.5), &grid).unwrap();
        let v = s.v_at(0.5);
        let vs: Vec<f64> = [0.5, 1.0, 2.0, 4.0, 1e9].iter().map(|&l| v_truncated(&s, l, 0.5).unwrap()).collect();
        assert!(vs.windows(2).all(|w| w[1] >= w[0]));
        assert!((vs[4] - v).abs() < 1e-8);
        assert_eq!(v_truncated(&s, 1.0, 0.0).unwrap(), 0.0);
    }
}
