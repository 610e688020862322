use super::config::{ExperimentConfig, Observable};
use crate::measures::{Side, TestFunction};

/// Center and half-width of the default bumps on the positive half-line, in units
/// of the support radius. Each bump stays inside `(0, 2.5R]`.
const BUMPS: [(f64, f64); 8] =
    [(0.25, 0.2), (0.5, 0.4), (0.75, 0.25), (1.0, 0.5), (1.25, 0.25), (1.5, 0.5), (1.75, 0.25), (2.0, 0.5)];

/// Bumps for the full line: four on each side, none touching the origin.
const FULL_BUMPS: [(f64, f64); 8] =
    [(-1.5, 0.5), (-1.0, 0.25), (-0.6, 0.4), (-0.25, 0.2), (0.25, 0.2), (0.6, 0.4), (1.0, 0.25), (1.5, 0.5)];

/// Eight bumps and the ramps `H_1`, `H_2`, scaled by `radius` and clipped to
/// the window of half-width `window`.
pub fn default_dictionary(observable: Observable, radius: f64, window: f64) -> Vec<TestFunction> {
    let (bumps, side): (Vec<(f64, f64)>, Side) = match observable {
        Observable::Xi => (BUMPS.to_vec(), Side::Positive),
        Observable::Eta => (BUMPS.iter().map(|&(c, w)| (-c, w)).collect(), Side::Negative),
        Observable::Full | Observable::Interface => (FULL_BUMPS.to_vec(), Side::Negative),
    };
    let mut out: Vec<TestFunction> = bumps
        .into_iter()
        .enumerate()
        .map(|(k, (c, w))| TestFunction::bump(format!("bump{k}"), c * radius, w * radius))
        .collect();
    for l in [1.0, 2.0] {
        out.push(TestFunction::ramp(format!("H{l}"), (l * radius).min(window), side));
    }
    out
}

/// The dictionary actually used for `observable`: the config override or the default.
pub fn dictionary_for(cfg: &ExperimentConfig, observable: Observable) -> Vec<TestFunction> {
    let custom = match observable {
        Observable::Xi => &cfg.dictionary.xi,
        Observable::Eta => &cfg.dictionary.eta,
        Observable::Full => &cfg.dictionary.full,
        Observable::Interface => &cfg.dictionary.interface,
    };
    custom
        .clone()
        .unwrap_or_else(|| default_dictionary(observable, cfg.support_radius, cfg.domain_half_width()))
}
