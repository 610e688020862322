//! Exact-structure checks shared by the integration tests and the acceptance run.
//! Each check returns `Err` with the first counterexample.

#![allow(dead_code)]

use interface_hydro::engine::{drive_lockstep, CoupledProcess, PottsProcess};
use interface_hydro::lattice::{
    admissible_zr_jumps, allowed_flips, apply_flip, apply_zr_jump, flip_to_zr_jump, kipnis_forward, kipnis_inverse,
    trailing_holes, CoupledConfig, ExclusionConfig, IncrementConfig, SurfaceConfig,
};
use interface_hydro::measures::{rng_for, sample_exclusion_initial, sample_zr_initial, ProfileSpec, Stream};

pub type Check = Result<String, String>;

/// Every count vector in `{0..=max}^len`.
fn count_vectors(len: usize, max: u32) -> impl Iterator<Item = Vec<u32>> {
    let base = max as u64 + 1;
    (0..base.pow(len as u32)).map(move |mut code| {
        let mut v = Vec::with_capacity(len);
        for _ in 0..len {
            v.push((code % base) as u32);
            code /= base;
        }
        v
    })
}

/// Surface / increments and full-line / coupled round trips on every window
/// of at most `max_sites` increment sites containing `0` or `1`, counts `<= max_count`.
pub fn surface_round_trips(max_sites: usize, max_count: u32) -> Check {
    let mut n = 0u64;
    for len in 1..=max_sites {
        for lo in 1 - len as i64..=1 {
            for counts in count_vectors(len, max_count) {
                let eta = IncrementConfig::new(lo, counts);
                for f0 in [-2, 0, 3] {
                    let f = SurfaceConfig::from_increments(&eta, f0).map_err(|e| format!("{eta:?}: {e}"))?;
                    if f.origin_height() != Some(f0) || f.to_increments().ok().as_ref() != Some(&eta) {
                        return Err(format!("surface round trip fails for {eta:?}, f(0) = {f0}"));
                    }
                }
                if eta.lo() <= 0 && eta.hi() >= 1 {
                    let c = CoupledConfig::from_full_increments(&eta).map_err(|e| format!("{eta:?}: {e}"))?;
                    if c.to_full_increments() != eta {
                        return Err(format!("coupled round trip fails for {eta:?}"));
                    }
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} increment windows"))
}

/// Kipnis map both ways: gap sequences with a tail of holes, and every
/// exclusion configuration on boxes up to `max_box` sites.
pub fn kipnis_round_trips(max_sites: usize, max_count: u32, max_box: usize) -> Check {
    let mut n = 0u64;
    for len in 0..=max_sites {
        for gaps in count_vectors(len, max_count) {
            for tail in 0..=2usize {
                let eta = IncrementConfig::new(1, gaps.clone());
                let box_len = eta.total() as usize + len + tail;
                if len == 0 && box_len == 0 {
                    continue;
                }
                let xi = kipnis_forward(&eta, box_len).map_err(|e| format!("{eta:?}: {e}"))?;
                if kipnis_inverse(&xi) != eta || trailing_holes(&xi) != tail || xi.particle_count() != len {
                    return Err(format!("gap round trip fails for {gaps:?} with tail {tail}"));
                }
                n += 1;
            }
        }
    }
    for len in 1..=max_box {
        for code in 0u32..(1 << len) {
            let xi = ExclusionConfig::new((0..len).map(|i| code >> i & 1 == 1).collect());
            let back = kipnis_forward(&kipnis_inverse(&xi), len).map_err(|e| format!("{xi:?}: {e}"))?;
            if back != xi {
                return Err(format!("exclusion round trip fails for {:?}", xi.occupancy()));
            }
            n += 1;
        }
    }
    Ok(format!("{n} configurations"))
}

/// Allowed flips of `f` and admissible jumps of its increments are in
/// bijection, and each flip and its jump lead to the same increments.
pub fn flip_jump_bijection(max_sites: usize, max_count: u32) -> Check {
    let mut n = 0u64;
    let mut moves = 0u64;
    for len in 1..=max_sites {
        for lo in 1 - len as i64..=1 {
            for counts in count_vectors(len, max_count) {
                let eta = IncrementConfig::new(lo, counts);
                let f = SurfaceConfig::from_increments(&eta, 0).map_err(|e| e.to_string())?;
                let flips = allowed_flips(&f);
                let mut images = flips
                    .iter()
                    .map(|&fl| flip_to_zr_jump(fl, &f))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| format!("{eta:?}: {e}"))?;
                let mut jumps = admissible_zr_jumps(&eta);
                images.sort();
                jumps.sort();
                let distinct = images.windows(2).all(|w| w[0] != w[1]);
                if !distinct || images != jumps {
                    return Err(format!("{eta:?}: flips map to {images:?}, admissible jumps {jumps:?}"));
                }
                for &fl in &flips {
                    let jump = flip_to_zr_jump(fl, &f).map_err(|e| e.to_string())?;
                    let g = apply_flip(&f, fl).map_err(|e| e.to_string())?;
                    let after = apply_zr_jump(&eta, jump).map_err(|e| e.to_string())?;
                    if g.to_increments().ok().as_ref() != Some(&after) {
                        return Err(format!("{eta:?}: {fl:?} and {jump:?} disagree"));
                    }
                    // the origin column only moves through the boundary jump 0 -> 1
                    let dropped = g.origin_height() != f.origin_height();
                    if dropped != (jump.from == 0 && jump.to == 1) || g.origin_height() > f.origin_height() {
                        return Err(format!("{eta:?}: {fl:?} moves f(0) wrongly"));
                    }
                    moves += 1;
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} windows, {moves} flips"))
}

fn sampled_config(n: u32, sites: usize, seed: u64) -> Result<CoupledConfig, String> {
    let p = ProfileSpec::constant(0.5);
    let eta = sample_zr_initial(&p, n, -(sites as i64), 0, &mut rng_for(seed, Stream::Dissipative)).map_err(|e| e.to_string())?;
    let xi = sample_exclusion_initial(&p, n, sites, &mut rng_for(seed, Stream::Exclusion)).map_err(|e| e.to_string())?;
    CoupledConfig::new(eta, xi).map_err(|e| e.to_string())
}

/// Along event-by-event paths of the coupled process: left count plus `X`
/// constant, exclusion particle count constant, `X` nondecreasing.
pub fn ledgers_and_monotone_front(paths: u64, events: usize) -> Check {
    let mut fired = 0u64;
    let mut crossings = 0u64;
    for seed in 0..paths {
        for rb in [1.0, 0.5] {
            let c = sampled_config(8, 24, seed)?;
            let ledger = c.ledger();
            let right = c.xi().particle_count();
            let mut p = CoupledProcess::new(&c, rb, 8).map_err(|e| e.to_string())?;
            let mut rng = rng_for(seed, Stream::Dynamics);
            let mut x = 0;
            for _ in 0..events {
                let Some((ch, _)) = p.draw(&mut rng) else { break };
                p.fire(ch).map_err(|e| e.to_string())?;
                let now = p.config();
                if now.ledger() != ledger {
                    return Err(format!("seed {seed}: ledger {} != {ledger}", now.ledger()));
                }
                if now.xi().particle_count() != right {
                    return Err(format!("seed {seed}: exclusion count changed"));
                }
                if p.crossings() < x {
                    return Err(format!("seed {seed}: X decreased"));
                }
                x = p.crossings();
                fired += 1;
            }
            crossings += x;
        }
    }
    Ok(format!("{fired} events, {crossings} crossings"))
}

/// Flip dynamics and the coupled process at `r_b = 1/2` driven move by move:
/// identical increments and `f(0) = -X` after every move.
pub fn origin_height_is_minus_front(paths: u64, moves: usize) -> Check {
    let mut total = 0;
    for seed in 0..paths {
        let c = sampled_config(8, 24, seed)?;
        let surface = SurfaceConfig::from_increments(&c.to_full_increments(), 0).map_err(|e| e.to_string())?;
        let mut a = CoupledProcess::new(&c, 0.5, 8).map_err(|e| e.to_string())?;
        let mut b = PottsProcess::new(&surface, 8).map_err(|e| e.to_string())?;
        let rep = drive_lockstep(&mut a, &mut b, moves, &mut rng_for(seed, Stream::Dynamics))
            .map_err(|e| format!("seed {seed}: {e}"))?;
        let boundary = b.counts().boundary as i64;
        if rep.origin_height != -boundary || b.surface().origin_height() != Some(-(a.crossings() as i64)) {
            return Err(format!("seed {seed}: f(0) = {} but X = {}", rep.origin_height, a.crossings()));
        }
        total += rep.steps;
    }
    Ok(format!("{total} lockstep moves"))
}

/// All exact-structure checks at the sizes used by the acceptance run.
pub fn exact_structure_suite() -> Vec<(&'static str, Check)> {
    vec![
        ("surface/increment round trips", surface_round_trips(8, 3)),
        ("Kipnis round trips", kipnis_round_trips(8, 3, 14)),
        ("flip/jump bijection", flip_jump_bijection(8, 3)),
        ("ledgers and monotone X", ledgers_and_monotone_front(20, 4000)),
        ("f(0) = -X", origin_height_is_minus_front(20, 4000)),
    ]
}
