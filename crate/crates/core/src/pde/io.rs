use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{PdeSolution, Profile, SolutionKind};
use crate::Result;

/// Grid metadata written next to the solution CSVs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub du: f64,
    pub dt: f64,
    pub domain: [f64; 2],
    #[serde(rename = "T")]
    pub t: f64,
    pub scheme: String,
}

impl Sidecar {
    pub fn of(solution: &PdeSolution) -> Self {
        let g = &solution.grid;
        let scheme = match solution.kind {
            SolutionKind::Dissipative => "explicit vertex-centred finite volume on Phi(rho), Dirichlet 0 at u=0",
            SolutionKind::Exclusion => "explicit cell-centred finite volume, upwind drift, zero flux at both ends",
            SolutionKind::FullLine => "explicit vertex-centred finite volume on both half-lines, flux matched at 0",
        };
        Self { du: g.du, dt: g.dt, domain: [g.lo, g.hi], t: g.t_max, scheme: scheme.into() }
    }
}

/// `t,u,value` rows for every stored profile.
pub fn write_profiles_csv(profiles: &[Profile], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["t", "u", "value"])?;
    for p in profiles {
        for (u, v) in p.u.iter().zip(&p.values) {
            w.write_record([p.t.to_string(), u.to_string(), v.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `t,a,v` rows for every time step.
pub fn write_series_csv(solution: &PdeSolution, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["t", "a", "v"])?;
    for (n, (a, v)) in solution.a_series.iter().zip(&solution.v_series).enumerate() {
        let t = n as f64 * solution.grid.dt;
        w.write_record([t.to_string(), a.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sidecar(solution: &PdeSolution, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(file, &Sidecar::of(solution))?;
    Ok(())
}
