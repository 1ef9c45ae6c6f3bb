use crate::error::{Error, Result};

/// Result of checking that no window of width `c1·u` holds more than `1 - c2` of the mass.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FluctuationTest {
    pub pass: bool,
    /// Largest empirical probability of a window `[a, a + c1·u]`.
    pub max_mass: f64,
    pub worst_window: (f64, f64),
    /// `1 - c2 + 3 √(p(1-p)/n)` with `p = max_mass`.
    pub threshold: f64,
}

pub fn fluctuation_window_test(counts: &[i64], u: f64, c1: f64, c2: f64) -> Result<FluctuationTest> {
    if counts.is_empty() {
        return Err(Error::InvalidArgument("no counts".into()));
    }
    if !(c2 > 0.0 && c2 < 1.0) {
        return Err(Error::InvalidArgument(format!("c2 must lie in (0, 1), got {c2}")));
    }
    let width = c1 * u;
    if !(width >= 0.0) {
        return Err(Error::InvalidArgument(format!("window width {width} must be non-negative")));
    }
    let mut sorted: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    // Some optimal window starts at a data point.
    let (mut best, mut start, mut hi) = (0usize, sorted[0], 0usize);
    for lo in 0..n {
        hi = hi.max(lo);
        while hi + 1 < n && sorted[hi + 1] <= sorted[lo] + width {
            hi += 1;
        }
        if hi - lo + 1 > best {
            best = hi - lo + 1;
            start = sorted[lo];
        }
    }
    let p = best as f64 / n as f64;
    let threshold = 1.0 - c2 + 3.0 * (p * (1.0 - p) / n as f64).sqrt();
    Ok(FluctuationTest { pass: p <= threshold, max_mass: p, worst_window: (start, start + width), threshold })
}

/// Both sides of `P(a ≤ X ≤ b) ≤ (1 + P(|X - Y| ≤ b - a) + d_TV) / 2` on paired samples.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ChatterjeeReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub margin: f64,
    pub holds: bool,
}

pub fn chatterjee_bound_check(xs: &[f64], ys: &[f64], a: f64, b: f64, dtv_bound: f64) -> Result<ChatterjeeReport> {
    if !(a <= b) {
        return Err(Error::InvalidArgument(format!("need a <= b, got [{a}, {b}]")));
    }
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(Error::InvalidArgument("need equally many, non-zero, X and Y samples".into()));
    }
    if !(0.0..=1.0).contains(&dtv_bound) {
        return Err(Error::InvalidArgument(format!("total variation bound {dtv_bound} outside [0, 1]")));
    }
    let n = xs.len() as f64;
    let lhs = xs.iter().filter(|&&x| a <= x && x <= b).count() as f64 / n;
    let close = xs.iter().zip(ys).filter(|(x, y)| (*x - *y).abs() <= b - a).count() as f64 / n;
    let rhs = 0.5 * (1.0 + close + dtv_bound);
    Ok(ChatterjeeReport { lhs, rhs, margin: rhs - lhs, holds: lhs <= rhs })
}
