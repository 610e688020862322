//! Line-oriented text format: `window_lo window_hi` followed by the
//! whitespace-separated integer values of the sites in the window.

use super::{CoupledConfig, ExclusionConfig, IncrementConfig, SurfaceConfig};
use crate::{Error, Result};

pub trait LineFormat: Sized {
    fn to_text(&self) -> String;
    fn from_text(s: &str) -> Result<Self>;
}

fn write_window<T: ToString>(lo: i64, hi: i64, values: impl Iterator<Item = T>) -> String {
    let body: Vec<String> = values.map(|v| v.to_string()).collect();
    format!("{lo} {hi}\n{}\n", body.join(" "))
}

fn read_window<T: std::str::FromStr>(s: &str) -> Result<(i64, i64, Vec<T>)> {
    let mut tokens = s.split_whitespace();
    let mut next_i64 = |what: &str| -> Result<i64> {
        tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("missing {what}")))?
            .parse::<i64>()
            .map_err(|e| Error::Parse(format!("{what}: {e}")))
    };
    let lo = next_i64("window_lo")?;
    let hi = next_i64("window_hi")?;
    let values = tokens
        .map(|t| t.parse::<T>().map_err(|_| Error::Parse(format!("bad value `{t}`"))))
        .collect::<Result<Vec<T>>>()?;
    let expected = (hi - lo + 1).max(0) as usize;
    if values.len() != expected {
        return Err(Error::Parse(format!(
            "window [{lo}, {hi}] needs {expected} values, found {}",
            values.len()
        )));
    }
    Ok((lo, hi, values))
}

impl LineFormat for SurfaceConfig {
    fn to_text(&self) -> String {
        write_window(self.lo(), self.hi(), self.heights().iter())
    }

    fn from_text(s: &str) -> Result<Self> {
        let (lo, _, values) = read_window::<i64>(s)?;
        SurfaceConfig::new(lo, values)
    }
}

impl LineFormat for IncrementConfig {
    fn to_text(&self) -> String {
        write_window(self.lo(), self.hi(), self.counts().iter())
    }

    fn from_text(s: &str) -> Result<Self> {
        let (lo, _, values) = read_window::<u32>(s)?;
        Ok(IncrementConfig::new(lo, values))
    }
}

impl LineFormat for ExclusionConfig {
    fn to_text(&self) -> String {
        write_window(1, self.len() as i64, self.occupancy().iter().map(|&b| u8::from(b)))
    }

    fn from_text(s: &str) -> Result<Self> {
        let (lo, _, values) = read_window::<u8>(s)?;
        if lo != 1 {
            return Err(Error::Parse(format!("exclusion window must start at 1, got {lo}")));
        }
        values
            .into_iter()
            .map(|v| match v {
                0 => Ok(false),
                1 => Ok(true),
                _ => Err(Error::Parse(format!("occupancy must be 0 or 1, got {v}"))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(ExclusionConfig::new)
    }
}

/// Dissipative block, exclusion block, then a line `crossings X`.
impl LineFormat for CoupledConfig {
    fn to_text(&self) -> String {
        format!("{}{}crossings {}\n", self.eta().to_text(), self.xi().to_text(), self.crossings())
    }

    fn from_text(s: &str) -> Result<Self> {
        let mut lines: Vec<&str> = s.lines().collect();
        while lines.last().is_some_and(|l| l.trim().is_empty()) {
            lines.pop();
        }
        if lines.len() != 5 {
            return Err(Error::Parse(format!("coupled configuration needs 5 lines, found {}", lines.len())));
        }
        let eta = IncrementConfig::from_text(&lines[0..2].join("\n"))?;
        let xi = ExclusionConfig::from_text(&lines[2..4].join("\n"))?;
        let crossings = lines[4]
            .strip_prefix("crossings")
            .ok_or_else(|| Error::Parse("missing `crossings` line".into()))?
            .trim()
            .parse::<u64>()
            .map_err(|e| Error::Parse(format!("crossings: {e}")))?;
        Ok(CoupledConfig::new(eta, xi)?.with_crossings(crossings))
    }
}
