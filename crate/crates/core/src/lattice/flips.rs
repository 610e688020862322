//! Zero-temperature flip rules of the interface and their zero-range image.
//!
//! Inside the class of configurations described by a nondecreasing interface
//! `f`, a spin flip lowers the energy or keeps it only in three situations:
//!
//! 1. spin `1` at `(x, f(x))` when `f(x) > f(x-1)`: the column drops by one;
//! 2. spin `0` at `(x, f(x)+1)` when `x < 0` and `f(x) < f(x+1)`: the column grows;
//! 3. spin `-1` at `(x, f(x)+1)` when `x > 0` and `f(x) < f(x+1)`: the column grows.
//!
//! The column at the origin can only drop. Columns on the window boundary are
//! never flipped since one of their neighbour increments is unknown.

use super::{IncrementConfig, SurfaceConfig, ZrJump};
use crate::{Error, Result};

/// New spin written by a flip.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Spin {
    Minus,
    Zero,
    Plus,
}

impl Spin {
    pub fn value(self) -> i8 {
        match self {
            Spin::Minus => -1,
            Spin::Zero => 0,
            Spin::Plus => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Flip {
    pub column: i64,
    pub spin: Spin,
}

impl Flip {
    pub fn new(column: i64, spin: Spin) -> Self {
        Self { column, spin }
    }

    /// Height change of the flipped column.
    pub fn delta(self) -> i64 {
        match self.spin {
            Spin::Plus => -1,
            Spin::Zero | Spin::Minus => 1,
        }
    }
}

/// Whether column `x` may drop (case 1).
pub(crate) fn can_lower(f: &SurfaceConfig, x: i64) -> bool {
    interior(f, x) && f.height(x) > f.height(x - 1)
}

/// Spin written when column `x` grows, if it may (cases 2 and 3).
pub(crate) fn raise_spin(f: &SurfaceConfig, x: i64) -> Option<Spin> {
    if !interior(f, x) || f.height(x) >= f.height(x + 1) {
        return None;
    }
    match x.cmp(&0) {
        std::cmp::Ordering::Less => Some(Spin::Zero),
        std::cmp::Ordering::Greater => Some(Spin::Minus),
        std::cmp::Ordering::Equal => None,
    }
}

fn interior(f: &SurfaceConfig, x: i64) -> bool {
    x > f.lo() && x < f.hi()
}

/// All admissible flips, ordered by column then spin.
pub fn allowed_flips(f: &SurfaceConfig) -> Vec<Flip> {
    let mut out = Vec::new();
    for x in f.lo() + 1..f.hi() {
        if let Some(spin) = raise_spin(f, x) {
            out.push(Flip::new(x, spin));
        }
        if can_lower(f, x) {
            out.push(Flip::new(x, Spin::Plus));
        }
    }
    out.sort();
    out
}

fn check_allowed(f: &SurfaceConfig, flip: Flip) -> Result<()> {
    let ok = match flip.spin {
        Spin::Plus => can_lower(f, flip.column),
        s => raise_spin(f, flip.column) == Some(s),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{flip:?} is not an allowed flip")))
    }
}

pub fn apply_flip(f: &SurfaceConfig, flip: Flip) -> Result<SurfaceConfig> {
    check_allowed(f, flip)?;
    let mut g = f.clone();
    *g.height_mut(flip.column) += flip.delta();
    Ok(g)
}

/// Zero-range jump induced on the increments by an allowed flip.
pub fn flip_to_zr_jump(flip: Flip, f: &SurfaceConfig) -> Result<ZrJump> {
    check_allowed(f, flip)?;
    let x = flip.column;
    Ok(match flip.spin {
        Spin::Plus => ZrJump::new(x, x + 1),
        Spin::Zero | Spin::Minus => ZrJump::new(x + 1, x),
    })
}

/// Every nearest-neighbour jump inside the window of `eta` from an occupied
/// site, except the forbidden jump `1 -> 0`. Ordered by `(from, to)`.
pub fn admissible_zr_jumps(eta: &IncrementConfig) -> Vec<ZrJump> {
    let mut out = Vec::new();
    for (x, k) in eta.sites() {
        if k == 0 {
            continue;
        }
        if eta.contains(x - 1) && x != 1 {
            out.push(ZrJump::new(x, x - 1));
        }
        if eta.contains(x + 1) {
            out.push(ZrJump::new(x, x + 1));
        }
    }
    out
}

pub fn apply_zr_jump(eta: &IncrementConfig, jump: ZrJump) -> Result<IncrementConfig> {
    if (jump.to - jump.from).abs() != 1 || !eta.contains(jump.from) || !eta.contains(jump.to) {
        return Err(Error::Precondition(format!("{jump:?} is not a nearest-neighbour jump inside the window")));
    }
    if eta.get(jump.from) == Some(0) {
        return Err(Error::Precondition(format!("site {} is empty", jump.from)));
    }
    let mut out = eta.clone();
    let lo = out.lo();
    out.counts_mut()[(jump.from - lo) as usize] -= 1;
    out.counts_mut()[(jump.to - lo) as usize] += 1;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_surface_is_frozen() {
        let f = SurfaceConfig::from_fn(-4, 4, |_| 0).unwrap();
        assert!(allowed_flips(&f).is_empty());
    }

    #[test]
    fn single_step_has_one_flip() {
        let f = SurfaceConfig::from_fn(-2, 2, |x| i64::from(x >= 1)).unwrap();
        assert_eq!(allowed_flips(&f), vec![Flip::new(1, Spin::Plus)]);
        let g = apply_flip(&f, Flip::new(1, Spin::Plus)).unwrap();
        assert_eq!(g.height(1), Some(0));
        assert_eq!(g.height(2), Some(1));
    }

    #[test]
    fn staircase_flips() {
        let f = SurfaceConfig::from_fn(-4, 4, |x| x).unwrap();
        let flips = allowed_flips(&f);
        for x in -3..=3 {
            assert!(flips.contains(&Flip::new(x, Spin::Plus)));
            assert_eq!(flips.contains(&Flip::new(x, Spin::Zero)), x < 0);
            assert_eq!(flips.contains(&Flip::new(x, Spin::Minus)), x > 0);
        }
        assert_eq!(flips.len(), 7 + 6);
        let g = apply_flip(&f, Flip::new(-1, Spin::Zero)).unwrap();
        assert_eq!(g.height(-1), Some(0));
    }

    #[test]
    fn rejects_disallowed_flip() {
        let f = SurfaceConfig::from_fn(-2, 2, |_| 0).unwrap();
        assert!(matches!(apply_flip(&f, Flip::new(0, Spin::Plus)), Err(Error::Precondition(_))));
        let stair = SurfaceConfig::from_fn(-3, 3, |x| x).unwrap();
        // the origin column never grows
        assert!(apply_flip(&stair, Flip::new(0, Spin::Minus)).is_err());
        assert!(apply_flip(&stair, Flip::new(0, Spin::Zero)).is_err());
        // boundary columns are excluded
        assert!(apply_flip(&stair, Flip::new(3, Spin::Plus)).is_err());
    }

    #[test]
    fn flip_jump_images() {
        let f = SurfaceConfig::from_fn(-3, 3, |x| x).unwrap();
        assert_eq!(flip_to_zr_jump(Flip::new(0, Spin::Plus), &f).unwrap(), ZrJump::new(0, 1));
        assert_eq!(flip_to_zr_jump(Flip::new(-1, Spin::Zero), &f).unwrap(), ZrJump::new(0, -1));
        assert_eq!(flip_to_zr_jump(Flip::new(2, Spin::Minus), &f).unwrap(), ZrJump::new(3, 2));
    }

    #[test]
    fn zr_jump_from_one_to_zero_is_excluded() {
        let eta = IncrementConfig::new(0, vec![0, 2]);
        assert_eq!(admissible_zr_jumps(&eta), Vec::<ZrJump>::new());
        assert!(apply_zr_jump(&eta, ZrJump::new(1, 2)).is_err());
        let moved = apply_zr_jump(&IncrementConfig::new(0, vec![1, 0]), ZrJump::new(0, 1)).unwrap();
        assert_eq!(moved.counts(), &[0, 1]);
    }
}
