use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    /// `params = [c]`
    Constant,
    /// `params = [left, right, at]`
    Step,
    /// `params = [base, height, center, half_width]`, smooth compactly supported bump.
    Bump,
    /// `params = [u0, v0, u1, v1]`, linear between the two points, flat outside.
    LinearRamp,
    /// Piecewise linear through `(u, value)` pairs; from `path` (two-column CSV)
    /// or from `params` laid out as `u0, v0, u1, v1, ...`.
    Table,
}

/// Macroscopic initial profile. Outside `support` (when given) the profile is zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileSpec {
    pub kind: ProfileKind,
    #[serde(default)]
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

impl ProfileSpec {
    pub fn constant(c: f64) -> Self {
        Self { kind: ProfileKind::Constant, params: vec![c], support: None, path: None }
    }

    pub fn step(left: f64, right: f64, at: f64) -> Self {
        Self { kind: ProfileKind::Step, params: vec![left, right, at], support: None, path: None }
    }

    pub fn bump(base: f64, height: f64, center: f64, half_width: f64) -> Self {
        Self { kind: ProfileKind::Bump, params: vec![base, height, center, half_width], support: None, path: None }
    }

    pub fn linear_ramp(u0: f64, v0: f64, u1: f64, v1: f64) -> Self {
        Self { kind: ProfileKind::LinearRamp, params: vec![u0, v0, u1, v1], support: None, path: None }
    }

    pub fn table(points: &[(f64, f64)]) -> Self {
        let params = points.iter().flat_map(|&(u, v)| [u, v]).collect();
        Self { kind: ProfileKind::Table, params, support: None, path: None }
    }

    pub fn with_support(mut self, lo: f64, hi: f64) -> Self {
        self.support = Some([lo, hi]);
        self
    }

    /// Loads a table profile from a headerless or headed two-column CSV `(u, value)`.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let points = read_table(path)?;
        let mut spec = Self::table(&points);
        spec.path = Some(path.to_path_buf());
        Ok(spec)
    }

    /// Replaces a `path`-backed table by its inline points, so evaluation does no IO.
    /// Relative paths are resolved against `base`.
    pub fn resolve(&self, base: Option<&Path>) -> Result<Self> {
        match (&self.kind, &self.path) {
            (ProfileKind::Table, Some(p)) if self.params.is_empty() => {
                let full = match base {
                    Some(b) if p.is_relative() => b.join(p),
                    _ => p.clone(),
                };
                let mut spec = Self::from_csv(&full)?;
                spec.support = self.support;
                Ok(spec)
            }
            _ => Ok(self.clone()),
        }
    }

    fn expect_params(&self, n: usize) -> Result<()> {
        if self.params.len() != n {
            return Err(Error::Validation(format!(
                "{:?} profile needs {n} parameters, got {}",
                self.kind,
                self.params.len()
            )));
        }
        Ok(())
    }

    /// Checks parameter shapes and that every value is finite.
    pub fn validate(&self) -> Result<()> {
        match self.kind {
            ProfileKind::Constant => self.expect_params(1)?,
            ProfileKind::Step => self.expect_params(3)?,
            ProfileKind::Bump => {
                self.expect_params(4)?;
                if self.params[3] <= 0.0 {
                    return Err(Error::Validation("bump half-width must be positive".into()));
                }
            }
            ProfileKind::LinearRamp => {
                self.expect_params(4)?;
                if self.params[2] <= self.params[0] {
                    return Err(Error::Validation("linear ramp needs u0 < u1".into()));
                }
            }
            ProfileKind::Table => {
                if self.params.is_empty() || self.params.len() % 2 != 0 {
                    return Err(Error::Validation("table profile needs (u, value) pairs".into()));
                }
                let us: Vec<f64> = self.params.iter().step_by(2).copied().collect();
                if us.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Validation("table abscissae must be strictly increasing".into()));
                }
            }
        }
        if self.params.iter().any(|p| !p.is_finite()) {
            return Err(Error::Validation("profile is unbounded (non-finite parameter)".into()));
        }
        if let Some([a, b]) = self.support {
            if !(a <= b) {
                return Err(Error::Validation(format!("empty support [{a}, {b}]")));
            }
        }
        Ok(())
    }

    pub fn eval(&self, u: f64) -> f64 {
        if let Some([a, b]) = self.support {
            if u < a || u > b {
                return 0.0;
            }
        }
        let p = &self.params;
        match self.kind {
            ProfileKind::Constant => p[0],
            ProfileKind::Step => {
                if u < p[2] {
                    p[0]
                } else {
                    p[1]
                }
            }
            ProfileKind::Bump => p[0] + p[1] * smooth_bump((u - p[2]) / p[3]),
            ProfileKind::LinearRamp => {
                let s = ((u - p[0]) / (p[2] - p[0])).clamp(0.0, 1.0);
                p[1] + s * (p[3] - p[1])
            }
            ProfileKind::Table => {
                let n = p.len() / 2;
                let (u0, v0) = (p[0], p[1]);
                let (un, vn) = (p[2 * n - 2], p[2 * n - 1]);
                if u <= u0 {
                    return v0;
                }
                if u >= un {
                    return vn;
                }
                let k = (0..n - 1).find(|&k| u < p[2 * k + 2]).unwrap_or(n - 2);
                let (ua, va, ub, vb) = (p[2 * k], p[2 * k + 1], p[2 * k + 2], p[2 * k + 3]);
                va + (u - ua) / (ub - ua) * (vb - va)
            }
        }
    }

    /// Minimum and maximum over `[lo, hi]`, from a dense sample plus breakpoints.
    pub fn range_on(&self, lo: f64, hi: f64) -> (f64, f64) {
        let mut pts: Vec<f64> = (0..=4096).map(|i| lo + (hi - lo) * i as f64 / 4096.0).collect();
        let mut breaks: Vec<f64> = match self.kind {
            ProfileKind::Step => vec![self.params[2]],
            ProfileKind::Bump => vec![self.params[2]],
            ProfileKind::LinearRamp => vec![self.params[0], self.params[2]],
            ProfileKind::Table => self.params.iter().step_by(2).copied().collect(),
            ProfileKind::Constant => vec![],
        };
        if let Some([a, b]) = self.support {
            breaks.extend([a, b, a - 1e-12, b + 1e-12]);
        }
        pts.extend(breaks.into_iter().filter(|u| *u >= lo && *u <= hi));
        pts.iter().map(|&u| self.eval(u)).fold((f64::INFINITY, f64::NEG_INFINITY), |(m, x), v| (m.min(v), x.max(v)))
    }

    /// Density profile check: finite and nonnegative on `[lo, hi]`.
    pub fn validate_density(&self, lo: f64, hi: f64) -> Result<()> {
        self.validate()?;
        let (min, _) = self.range_on(lo, hi);
        if min < 0.0 {
            return Err(Error::Validation(format!("density profile takes negative value {min}")));
        }
        Ok(())
    }

    /// Exclusion profile check: strictly positive and at most one on `[lo, hi]`.
    pub fn validate_exclusion(&self, lo: f64, hi: f64) -> Result<()> {
        self.validate()?;
        let (min, max) = self.range_on(lo, hi);
        if min <= 0.0 || max > 1.0 {
            return Err(Error::Validation(format!(
                "exclusion profile must lie in (0, 1], observed range [{min}, {max}]"
            )));
        }
        Ok(())
    }
}

/// `exp(1 - 1/(1 - r^2))` on `|r| < 1`, zero outside; equals 1 at `r = 0`.
pub(crate) fn smooth_bump(r: f64) -> f64 {
    if r.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - r * r)).exp()
    }
}

fn read_table(path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_path(path)?;
    let mut points = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.len() < 2 {
            return Err(Error::Parse(format!("{}: line {} needs two columns", path.display(), i + 1)));
        }
        match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
            (Ok(u), Ok(v)) => points.push((u, v)),
            // header row
            _ if i == 0 => continue,
            _ => return Err(Error::Parse(format!("{}: line {} is not numeric", path.display(), i + 1))),
        }
    }
    Ok(points)
}
