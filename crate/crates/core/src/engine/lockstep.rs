use rand::Rng;

use super::coupled::CoupledProcess;
use super::potts::PottsProcess;
use super::rates::Channel;
use crate::lattice::{Flip, IncrementConfig, Spin, ZrJump};
use crate::{Error, Result};

/// A dynamics whose moves can be named by zero-range jumps on full-line increments.
pub trait ZrKernel {
    /// Active moves, sorted.
    fn zr_moves(&self) -> Vec<ZrJump>;
    fn apply_zr(&mut self, jump: ZrJump) -> Result<()>;
    fn full_increments(&self) -> IncrementConfig;
    /// `f(0)` of the interface.
    fn origin_height(&self) -> i64;
}

impl ZrKernel for CoupledProcess {
    fn zr_moves(&self) -> Vec<ZrJump> {
        let c = self.config();
        let mut out: Vec<ZrJump> = self.active_channels().iter().map(|ch| ch.zr_image(&c)).collect();
        out.sort();
        out
    }

    fn apply_zr(&mut self, jump: ZrJump) -> Result<()> {
        let ch = if jump.from <= 0 && jump.to <= 0 {
            Channel::ZeroRange { from: jump.from, to: jump.to }
        } else if jump == ZrJump::new(0, 1) {
            Channel::Boundary
        } else {
            let rank = jump.from.min(jump.to);
            let positions = self.config().xi().positions();
            let p = usize::try_from(rank - 1)
                .ok()
                .and_then(|i| positions.get(i).copied())
                .ok_or_else(|| Error::Precondition(format!("{jump:?} has no exclusion image")))?;
            if jump.to > jump.from {
                Channel::Exclusion { from: p, to: p - 1 }
            } else {
                Channel::Exclusion { from: p, to: p + 1 }
            }
        };
        self.fire(ch)
    }

    fn full_increments(&self) -> IncrementConfig {
        self.config().to_full_increments()
    }

    fn origin_height(&self) -> i64 {
        -(self.crossings() as i64)
    }
}

impl ZrKernel for PottsProcess {
    fn zr_moves(&self) -> Vec<ZrJump> {
        let mut out: Vec<ZrJump> = self
            .allowed()
            .into_iter()
            .map(|fl| match fl.spin {
                Spin::Plus => ZrJump::new(fl.column, fl.column + 1),
                _ => ZrJump::new(fl.column + 1, fl.column),
            })
            .collect();
        out.sort();
        out
    }

    fn apply_zr(&mut self, jump: ZrJump) -> Result<()> {
        let flip = if jump.to == jump.from + 1 {
            Flip::new(jump.from, Spin::Plus)
        } else {
            let x = jump.to;
            Flip::new(x, if x < 0 { Spin::Zero } else { Spin::Minus })
        };
        self.fire(flip)
    }

    fn full_increments(&self) -> IncrementConfig {
        self.surface().to_increments().expect("window has at least two columns")
    }

    fn origin_height(&self) -> i64 {
        self.surface().origin_height().expect("window contains the origin")
    }
}

/// Outcome of a lockstep drive.
#[derive(Clone, Debug, PartialEq)]
pub struct LockstepReport {
    pub steps: usize,
    pub final_increments: IncrementConfig,
    pub origin_height: i64,
}

/// Drives two kernels with one clock stream: at every step both must expose the
/// same move list, one move is drawn uniformly from it and applied to both, and
/// the increments and `f(0)` must agree afterwards. Any disagreement is an error.
pub fn drive_lockstep<A: ZrKernel, B: ZrKernel, R: Rng + ?Sized>(
    a: &mut A,
    b: &mut B,
    steps: usize,
    rng: &mut R,
) -> Result<LockstepReport> {
    let check = |a: &A, b: &B, k: usize| -> Result<()> {
        if a.full_increments() != b.full_increments() {
            return Err(Error::Validation(format!("increments differ after {k} steps")));
        }
        if a.origin_height() != b.origin_height() {
            return Err(Error::Validation(format!(
                "f(0) differs after {k} steps: {} vs {}",
                a.origin_height(),
                b.origin_height()
            )));
        }
        Ok(())
    };
    check(a, b, 0)?;
    let mut done = 0;
    for k in 0..steps {
        let moves = a.zr_moves();
        let other = b.zr_moves();
        if moves != other {
            return Err(Error::Validation(format!("move sets differ at step {k}: {moves:?} vs {other:?}")));
        }
        if moves.is_empty() {
            break;
        }
        let jump = moves[rng.random_range(0..moves.len())];
        a.apply_zr(jump)?;
        b.apply_zr(jump)?;
        check(a, b, k + 1)?;
        done += 1;
    }
    Ok(LockstepReport { steps: done, final_increments: a.full_increments(), origin_height: a.origin_height() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{CoupledConfig, SurfaceConfig};
    use crate::measures::{rng_for, Stream};

    #[test]
    fn potts_and_coupled_move_together() {
        let full = IncrementConfig::new(-6, vec![1, 0, 2, 1, 0, 3, 1, 0, 2, 1, 0, 1]);
        let c = CoupledConfig::from_full_increments(&full).unwrap();
        let f = SurfaceConfig::from_increments(&c.to_full_increments(), 0).unwrap();
        let mut a = CoupledProcess::new(&c, 0.5, 1).unwrap();
        let mut b = PottsProcess::new(&f, 1).unwrap();
        let mut rng = rng_for(11, Stream::Dynamics);
        let r = drive_lockstep(&mut a, &mut b, 5000, &mut rng).unwrap();
        assert_eq!(r.steps, 5000);
        assert_eq!(r.origin_height, -(a.crossings() as i64));
    }
}
