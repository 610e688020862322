//! Gap transform between positive-side zero-range occupation numbers and
//! exclusion configurations: `η(n)` is the number of holes in front of the
//! `n`-th exclusion particle.

use super::{ExclusionConfig, IncrementConfig};
use crate::{Error, Result};

/// Places the `n`-th particle at `p_n = η(1) + ... + η(n) + n` inside `[1, box_len]`.
///
/// `eta` must be indexed from site 1. Particles whose position falls beyond the
/// box are dropped; a box that cannot hold even the first particle is an error.
pub fn kipnis_forward(eta: &IncrementConfig, box_len: usize) -> Result<ExclusionConfig> {
    if !eta.is_empty() && eta.lo() != 1 {
        return Err(Error::Domain(format!("gap sequence must start at site 1, starts at {}", eta.lo())));
    }
    let mut xi = ExclusionConfig::empty(box_len);
    let mut pos = 0usize;
    for (n, &gap) in eta.counts().iter().enumerate() {
        pos += gap as usize + 1;
        if pos > box_len {
            if n == 0 {
                return Err(Error::BoxTooSmall { len: box_len, needed: pos });
            }
            break;
        }
        xi.occupancy_mut()[pos - 1] = true;
    }
    Ok(xi)
}

/// Gap before each particle, indexed from site 1. Holes behind the last
/// particle are not part of the result; see [`trailing_holes`].
pub fn kipnis_inverse(xi: &ExclusionConfig) -> IncrementConfig {
    let mut gaps = Vec::with_capacity(xi.particle_count());
    let mut run = 0u32;
    for &occ in xi.occupancy() {
        if occ {
            gaps.push(run);
            run = 0;
        } else {
            run += 1;
        }
    }
    IncrementConfig::new(1, gaps)
}

/// Number of empty sites after the last particle (the whole box if empty).
pub fn trailing_holes(xi: &ExclusionConfig) -> usize {
    xi.occupancy().iter().rev().take_while(|&&b| !b).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_gaps_fill_the_box() {
        let xi = kipnis_forward(&IncrementConfig::new(1, vec![0, 0, 0]), 3).unwrap();
        assert_eq!(xi.occupancy(), &[true, true, true]);
    }

    #[test]
    fn forward_positions() {
        let xi = kipnis_forward(&IncrementConfig::new(1, vec![2, 0, 1]), 7).unwrap();
        assert_eq!(xi.positions(), vec![3, 4, 6]);
    }

    #[test]
    fn single_gap() {
        for k in 0..6u32 {
            let xi = kipnis_forward(&IncrementConfig::new(1, vec![k]), k as usize + 1).unwrap();
            assert_eq!(xi.positions(), vec![k as usize + 1]);
        }
    }

    #[test]
    fn box_too_small() {
        let err = kipnis_forward(&IncrementConfig::new(1, vec![4]), 3).unwrap_err();
        assert!(matches!(err, Error::BoxTooSmall { len: 3, needed: 5 }));
    }

    #[test]
    fn particles_past_the_box_are_dropped() {
        let xi = kipnis_forward(&IncrementConfig::new(1, vec![0, 5, 0]), 4).unwrap();
        assert_eq!(xi.positions(), vec![1]);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(kipnis_inverse(&ExclusionConfig::new(vec![true; 3])).counts(), &[0, 0, 0]);
        let xi = ExclusionConfig::from_sites(7, &[3, 4, 6]).unwrap();
        assert_eq!(kipnis_inverse(&xi).counts(), &[2, 0, 1]);
        assert_eq!(trailing_holes(&xi), 1);
        assert!(kipnis_inverse(&ExclusionConfig::empty(5)).is_empty());
        assert_eq!(trailing_holes(&ExclusionConfig::empty(5)), 5);
    }
}
