use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;
/// One-sided 95% normal quantile.
pub const Z95_ONE_SIDED: f64 = 1.6448536269514722;

/// Sample mean with a normal-approximation 95% confidence interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub sd: f64,
    pub se: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl Summary {
    pub fn of(xs: &[f64]) -> Self {
        let count = xs.len();
        if count == 0 {
            return Self { count, mean: f64::NAN, sd: f64::NAN, se: f64::NAN, ci_lo: f64::NAN, ci_hi: f64::NAN };
        }
        let mean = xs.iter().sum::<f64>() / count as f64;
        let sd = if count > 1 {
            (xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        let se = sd / (count as f64).sqrt();
        Self { count, mean, sd, se, ci_lo: mean - Z95 * se, ci_hi: mean + Z95 * se }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.ci_lo <= x && x <= self.ci_hi
    }

    /// One-sided 95% upper confidence bound.
    pub fn upper_one_sided(&self) -> f64 {
        self.mean + Z95_ONE_SIDED * self.se
    }
}

/// Pearson goodness-of-fit of integer samples against a pmf. Bins are
/// `0, 1, ..., k_max - 1` plus a tail bin; `k_max` is the smallest value with
/// expected tail count below 5.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub observed: Vec<u64>,
    pub expected: Vec<f64>,
}

pub fn chi_square_test(samples: &[u32], pmf: impl Fn(u32) -> f64) -> Result<ChiSquareTest> {
    let total = samples.len() as f64;
    if samples.is_empty() {
        return Err(Error::Validation("chi-square test needs samples".into()));
    }
    let mut k_max = 0u32;
    let mut tail = 1.0;
    while total * tail >= 5.0 && k_max < 10_000 {
        tail -= pmf(k_max);
        k_max += 1;
    }
    // the last regular bin is folded into the tail so that every bin expects at least 5
    let k_max = k_max.saturating_sub(1).max(1);
    let mut expected: Vec<f64> = (0..k_max).map(|k| total * pmf(k)).collect();
    let head: f64 = expected.iter().sum();
    expected.push((total - head).max(0.0));
    let mut observed = vec![0u64; k_max as usize + 1];
    for &s in samples {
        observed[(s.min(k_max)) as usize] += 1;
    }
    let statistic = observed
        .iter()
        .zip(&expected)
        .filter(|(_, &e)| e > 0.0)
        .map(|(&o, &e)| (o as f64 - e) * (o as f64 - e) / e)
        .sum();
    let dof = expected.iter().filter(|&&e| e > 0.0).count().saturating_sub(1).max(1);
    let p_value = 1.0 - ChiSquared::new(dof as f64).map_err(|e| Error::Validation(e.to_string()))?.cdf(statistic);
    Ok(ChiSquareTest { statistic, dof, p_value, observed, expected })
}

/// Strictly decreasing sequence.
pub fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}
