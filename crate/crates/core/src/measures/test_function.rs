use serde::{Deserialize, Serialize};

use super::profile::smooth_bump;

/// Which half-line a ramp lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Negative,
    Positive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TestKind {
    /// `exp(1 - 1/(1 - r^2))` with `r = (u - center) / half_width`.
    SmoothBump { center: f64, half_width: f64 },
    /// `H_l(u) = (1 + u/l)_+` on the negative half-line, mirrored to
    /// `(1 - u/l)_+` on the positive one; zero on the other side.
    Ramp { l: f64, side: Side },
    /// Indicator of `[a, b]` with C-infinity shoulders of width `eps` outside it.
    SmoothIndicator { a: f64, b: f64, eps: f64 },
}

/// Compactly supported test function `G` used in empirical pairings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub id: String,
    #[serde(flatten)]
    pub kind: TestKind,
}

impl TestFunction {
    pub fn bump(id: impl Into<String>, center: f64, half_width: f64) -> Self {
        Self { id: id.into(), kind: TestKind::SmoothBump { center, half_width } }
    }

    pub fn ramp(id: impl Into<String>, l: f64, side: Side) -> Self {
        Self { id: id.into(), kind: TestKind::Ramp { l, side } }
    }

    pub fn indicator(id: impl Into<String>, a: f64, b: f64, eps: f64) -> Self {
        Self { id: id.into(), kind: TestKind::SmoothIndicator { a, b, eps } }
    }

    pub fn eval(&self, u: f64) -> f64 {
        match self.kind {
            TestKind::SmoothBump { center, half_width } => smooth_bump((u - center) / half_width),
            TestKind::Ramp { l, side } => match side {
                Side::Negative if u <= 0.0 => (1.0 + u / l).max(0.0),
                Side::Positive if u >= 0.0 => (1.0 - u / l).max(0.0),
                _ => 0.0,
            },
            TestKind::SmoothIndicator { a, b, eps } => transition((u - a + eps) / eps) * transition((b + eps - u) / eps),
        }
    }

    /// `G'(u)`; one-sided at the kinks of a ramp (the derivative inside the support).
    pub fn derivative(&self, u: f64) -> f64 {
        match self.kind {
            TestKind::SmoothBump { center, half_width } => {
                let r = (u - center) / half_width;
                if r.abs() >= 1.0 {
                    0.0
                } else {
                    let d = 1.0 - r * r;
                    smooth_bump(r) * (-2.0 * r / (d * d)) / half_width
                }
            }
            TestKind::Ramp { l, side } => match side {
                Side::Negative if u <= 0.0 && u > -l => 1.0 / l,
                Side::Positive if u >= 0.0 && u < l => -1.0 / l,
                _ => 0.0,
            },
            TestKind::SmoothIndicator { .. } => {
                let h = 1e-6;
                (self.eval(u + h) - self.eval(u - h)) / (2.0 * h)
            }
        }
    }

    /// Closed interval outside of which `G` vanishes.
    pub fn support(&self) -> (f64, f64) {
        match self.kind {
            TestKind::SmoothBump { center, half_width } => (center - half_width, center + half_width),
            TestKind::Ramp { l, side: Side::Negative } => (-l, 0.0),
            TestKind::Ramp { l, side: Side::Positive } => (0.0, l),
            TestKind::SmoothIndicator { a, b, eps } => (a - eps, b + eps),
        }
    }

    /// `∫ G(u) f(u) du` by composite Simpson on the support with `n` panels.
    pub fn integrate_against(&self, f: impl Fn(f64) -> f64, n: usize) -> f64 {
        let (a, b) = self.support();
        let n = n.max(2) + n % 2;
        let h = (b - a) / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let u = a + i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * self.eval(u) * f(u);
        }
        acc * h / 3.0
    }
}

/// Smooth 0-to-1 transition on `[0, 1]`.
fn transition(s: f64) -> f64 {
    let psi = |t: f64| if t <= 0.0 { 0.0 } else { (-1.0 / t).exp() };
    let a = psi(s);
    let b = psi(1.0 - s);
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_values() {
        let h = TestFunction::ramp("h2", 2.0, Side::Negative);
        assert_eq!(h.eval(0.0), 1.0);
        assert_eq!(h.eval(-1.0), 0.5);
        assert_eq!(h.eval(-3.0), 0.0);
        assert_eq!(h.eval(0.5), 0.0);
        assert_eq!(h.support(), (-2.0, 0.0));
        let m = TestFunction::ramp("h1+", 1.0, Side::Positive);
        assert_eq!(m.eval(0.25), 0.75);
    }

    #[test]
    fn bump_derivative_matches_finite_difference() {
        let g = TestFunction::bump("b", -0.5, 0.5);
        for &u in &[-0.9, -0.7, -0.5, -0.31, -0.05] {
            let fd = (g.eval(u + 1e-6) - g.eval(u - 1e-6)) / 2e-6;
            assert!((g.derivative(u) - fd).abs() < 1e-6, "u={u}");
        }
        assert_eq!(g.eval(0.0), 0.0);
    }

    #[test]
    fn indicator_is_one_inside() {
        let g = TestFunction::indicator("i", 0.0, 1.0, 0.1);
        assert!((g.eval(0.5) - 1.0).abs() < 1e-15);
        assert_eq!(g.eval(1.2), 0.0);
        assert!(g.eval(-0.05) > 0.0 && g.eval(-0.05) < 1.0);
    }

    #[test]
    fn simpson_integral_of_ramp() {
        let h = TestFunction::ramp("h", 1.0, Side::Negative);
        assert!((h.integrate_against(|_| 1.0, 100) - 0.5).abs() < 1e-12);
    }
}
