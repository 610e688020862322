use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use super::ProfileSpec;
use crate::lattice::{ExclusionConfig, IncrementConfig};
use crate::{Error, Result};

/// Independent RNG streams derived from one seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Dissipative = 1,
    Exclusion = 2,
    Dynamics = 3,
    /// Second exclusion configuration of a coupled pair.
    Partner = 4,
}

pub fn rng_for(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Marginal of the product measure with mean `alpha`:
/// `P(η = k) = (1/(1+α)) (α/(1+α))^k`.
pub fn nu_tilde_pmf(alpha: f64, k: u32) -> Result<f64> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be a finite nonnegative number, got {alpha}")));
    }
    let q = alpha / (1.0 + alpha);
    Ok(q.powi(k as i32) / (1.0 + alpha))
}

/// One draw from the geometric marginal with mean `alpha`.
pub fn sample_nu_tilde<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> Result<u32> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be a finite nonnegative number, got {alpha}")));
    }
    if alpha == 0.0 {
        return Ok(0);
    }
    let geo = Geometric::new(1.0 / (1.0 + alpha)).map_err(|e| Error::Domain(e.to_string()))?;
    u32::try_from(geo.sample(rng)).map_err(|_| Error::Domain("occupation number overflow".into()))
}

/// Local-equilibrium zero-range configuration on the lattice window `[lo, hi]`:
/// independent sites with `η(x) ~ ν̃_{ρ0(x/N)}`.
pub fn sample_zr_initial<R: Rng + ?Sized>(
    rho0: &ProfileSpec,
    n: u32,
    lo: i64,
    hi: i64,
    rng: &mut R,
) -> Result<IncrementConfig> {
    let scale = n as f64;
    rho0.validate_density(lo as f64 / scale, hi as f64 / scale)?;
    let counts = (lo..=hi)
        .map(|x| sample_nu_tilde(rho0.eval(x as f64 / scale), rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(IncrementConfig::new(lo, counts))
}

/// Independent Bernoulli occupancies `ξ(x) ~ Bernoulli(ζ0(x/N))` on `[1, len]`.
pub fn sample_exclusion_initial<R: Rng + ?Sized>(
    zeta0: &ProfileSpec,
    n: u32,
    len: usize,
    rng: &mut R,
) -> Result<ExclusionConfig> {
    let scale = n as f64;
    zeta0.validate_exclusion(1.0 / scale, len as f64 / scale)?;
    let occupancy = (1..=len)
        .map(|x| {
            let p = zeta0.eval(x as f64 / scale);
            p >= 1.0 || rng.random::<f64>() < p
        })
        .collect();
    Ok(ExclusionConfig::new(occupancy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    #[test]
    fn pmf_values() {
        assert_eq!(nu_tilde_pmf(1.0, 0).unwrap(), 0.5);
        assert_eq!(nu_tilde_pmf(0.0, 0).unwrap(), 1.0);
        assert_eq!(nu_tilde_pmf(0.0, 3).unwrap(), 0.0);
        assert!(nu_tilde_pmf(-0.5, 0).is_err());
    }

    #[test]
    fn pmf_normalised_with_mean_alpha() {
        for &alpha in &[0.1, 0.5, 1.0, 3.0] {
            let (mut total, mut mean) = (0.0, 0.0);
            for k in 0..2000 {
                let p = nu_tilde_pmf(alpha, k).unwrap();
                total += p;
                mean += k as f64 * p;
            }
            assert!((total - 1.0).abs() < 1e-12, "alpha={alpha}");
            assert!((mean - alpha).abs() < 1e-12, "alpha={alpha}");
        }
    }

    #[test]
    fn zero_profile_gives_empty_configuration() {
        let mut rng = rng_for(1, Stream::Dissipative);
        let eta = sample_zr_initial(&ProfileSpec::constant(0.0), 10, -50, 0, &mut rng).unwrap();
        assert_eq!(eta.total(), 0);
    }

    #[test]
    fn zr_sample_mean_within_three_standard_errors() {
        let mut rng = rng_for(7, Stream::Dissipative);
        let eta = sample_zr_initial(&ProfileSpec::constant(1.0), 100, -9_999, 0, &mut rng).unwrap();
        let n = eta.len() as f64;
        let mean = eta.total() as f64 / n;
        // variance of the geometric marginal with mean α is α(1+α)
        let se = (2.0f64 / n).sqrt();
        assert!((mean - 1.0).abs() < 3.0 * se, "mean={mean}");
    }

    #[test]
    fn zr_marginal_chi_square() {
        let mut rng = rng_for(11, Stream::Dissipative);
        let alpha = 1.0;
        let draws = 100_000;
        let bins = 8usize;
        let mut observed = vec![0f64; bins];
        for _ in 0..draws {
            let k = sample_nu_tilde(alpha, &mut rng).unwrap() as usize;
            observed[k.min(bins - 1)] += 1.0;
        }
        let mut expected: Vec<f64> = (0..bins - 1).map(|k| nu_tilde_pmf(alpha, k as u32).unwrap() * draws as f64).collect();
        expected.push(draws as f64 - expected.iter().sum::<f64>());
        let stat: f64 = observed.iter().zip(&expected).map(|(o, e)| (o - e).powi(2) / e).sum();
        let p = 1.0 - ChiSquared::new((bins - 1) as f64).unwrap().cdf(stat);
        assert!(p > 0.01, "chi2={stat} p={p}");
    }

    #[test]
    fn exclusion_samples() {
        let mut rng = rng_for(3, Stream::Exclusion);
        let full = sample_exclusion_initial(&ProfileSpec::constant(1.0), 10, 200, &mut rng).unwrap();
        assert_eq!(full.particle_count(), 200);

        let half = sample_exclusion_initial(&ProfileSpec::constant(0.5), 100, 10_000, &mut rng).unwrap();
        let density = half.particle_count() as f64 / 10_000.0;
        assert!((density - 0.5).abs() < 3.0 * (0.25f64 / 10_000.0).sqrt());

        let a = sample_exclusion_initial(&ProfileSpec::constant(0.3), 10, 500, &mut rng_for(5, Stream::Exclusion)).unwrap();
        let b = sample_exclusion_initial(&ProfileSpec::constant(0.3), 10, 500, &mut rng_for(5, Stream::Exclusion)).unwrap();
        assert_eq!(a, b);

        assert!(sample_exclusion_initial(&ProfileSpec::constant(0.0), 10, 5, &mut rng).is_err());
        assert!(sample_exclusion_initial(&ProfileSpec::constant(1.5), 10, 5, &mut rng).is_err());
    }

    #[test]
    fn streams_are_independent() {
        let a: u64 = rng_for(9, Stream::Dissipative).random();
        let b: u64 = rng_for(9, Stream::Exclusion).random();
        assert_ne!(a, b);
    }
}
