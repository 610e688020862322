use crate::lattice::{CoupledConfig, ZrJump};

/// Zero-range rate function, `g(k) = 1{k > 0}`.
pub fn g(k: u32) -> f64 {
    if k > 0 {
        1.0
    } else {
        0.0
    }
}

/// One move of the coupled generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Channel {
    /// Exclusion particle jumps between 1-based sites `from -> to`.
    Exclusion { from: usize, to: usize },
    /// Dissipative zero-range particle jumps `from -> to`, both `<= 0`.
    ZeroRange { from: i64, to: i64 },
    /// A particle leaves the origin and the exclusion is translated.
    Boundary,
}

impl Channel {
    /// The same move seen on full-line increments: a positive-side jump `n -> n+1`
    /// is the `n`-th exclusion particle stepping left, `n+1 -> n` stepping right.
    pub fn zr_image(&self, config: &CoupledConfig) -> ZrJump {
        match *self {
            Channel::ZeroRange { from, to } => ZrJump::new(from, to),
            Channel::Boundary => ZrJump::new(0, 1),
            Channel::Exclusion { from, to } => {
                let rank = config.xi().occupancy()[..from].iter().filter(|&&b| b).count() as i64;
                if to < from {
                    ZrJump::new(rank, rank + 1)
                } else {
                    ZrJump::new(rank + 1, rank)
                }
            }
        }
    }
}

/// Every active channel of a coupled state with its rate, already multiplied
/// by the diffusive speed-up `N^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct RateTable {
    pub channels: Vec<(Channel, f64)>,
    pub boundary_rate: f64,
    pub speedup: f64,
}

impl RateTable {
    pub fn total(&self) -> f64 {
        self.channels.iter().map(|(_, r)| r).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }
}

/// Lists the channels of `L + L_b + L̃` at state `c`: rate `1/2` for each allowed
/// exclusion jump, `g(η(x))/2` for each dissipative zero-range jump inside the
/// truncated window and `r_b g(η(0))` for the boundary move, all times `N^2`.
pub fn build_event_table(c: &CoupledConfig, rb: f64, n: u32) -> RateTable {
    let speedup = (n as f64) * (n as f64);
    let mut channels = Vec::new();
    let eta = c.eta();
    for (x, k) in eta.sites() {
        if k == 0 {
            continue;
        }
        if eta.contains(x - 1) {
            channels.push((Channel::ZeroRange { from: x, to: x - 1 }, 0.5 * g(k) * speedup));
        }
        if x < 0 {
            channels.push((Channel::ZeroRange { from: x, to: x + 1 }, 0.5 * g(k) * speedup));
        }
    }
    let occ = c.xi().occupancy();
    let len = occ.len();
    for i in 0..len {
        if !occ[i] {
            continue;
        }
        let x = i + 1;
        if x > 1 && !occ[i - 1] {
            channels.push((Channel::Exclusion { from: x, to: x - 1 }, 0.5 * speedup));
        }
        if x < len && !occ[i + 1] {
            channels.push((Channel::Exclusion { from: x, to: x + 1 }, 0.5 * speedup));
        }
    }
    let g0 = g(eta.get(0).unwrap_or(0));
    if rb > 0.0 && g0 > 0.0 {
        channels.push((Channel::Boundary, rb * g0 * speedup));
    }
    RateTable { channels, boundary_rate: rb, speedup }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{ExclusionConfig, IncrementConfig};

    #[test]
    fn frozen_state_has_no_channels() {
        let c = CoupledConfig::new(IncrementConfig::zeros(-5, 0), ExclusionConfig::empty(6)).unwrap();
        let t = build_event_table(&c, 1.0, 10);
        assert!(t.is_empty());
        assert_eq!(t.total(), 0.0);
    }

    #[test]
    fn single_interior_particle() {
        let c = CoupledConfig::new(IncrementConfig::zeros(-3, 0), ExclusionConfig::from_sites(5, &[3]).unwrap()).unwrap();
        let t = build_event_table(&c, 1.0, 1);
        assert_eq!(
            t.channels,
            vec![(Channel::Exclusion { from: 3, to: 2 }, 0.5), (Channel::Exclusion { from: 3, to: 4 }, 0.5)]
        );
    }

    #[test]
    fn boundary_rate_saturates() {
        let c = CoupledConfig::new(IncrementConfig::new(-1, vec![0, 3]), ExclusionConfig::empty(2)).unwrap();
        let t = build_event_table(&c, 1.0, 8);
        let b: Vec<_> = t.channels.iter().filter(|(ch, _)| *ch == Channel::Boundary).collect();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].1, 64.0);
        // the occupied origin also feeds its left neighbour at rate 1/2
        assert_eq!(t.total(), 64.0 + 32.0);
    }

    #[test]
    fn g_is_indicator() {
        assert_eq!(g(0), 0.0);
        assert_eq!(g(1), 1.0);
        assert_eq!(g(17), 1.0);
    }
}
