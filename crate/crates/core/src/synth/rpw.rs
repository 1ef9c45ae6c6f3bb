//! Truncated Bessel-series synthesis of the random plane wave.

use std::collections::HashMap;
use std::f64::consts::SQRT_2;

use ndarray::Array2;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex64;

use crate::bessel::bessel_j_orders;
use crate::error::{Error, Result};
use crate::grid::{FieldSample, GridSpec};
use crate::seed::{rng_from_seed, seed_split};
use crate::stats::ols;

/// Fraction `β` of the truncation order used as the radius of the error ball.
pub const TRUNCATION_BALL_FRACTION: f64 = 0.8;

/// `⌈2 √2 L⌉` for a square sampled region of side `L` (diameter `√2 L`).
pub fn rpw_truncation_order(grid: &GridSpec) -> usize {
    ((2.0 * SQRT_2 * grid.sampled_side()).ceil() as usize).max(1)
}

/// Coefficients of `f_N = Σ_{k≤N} 2^{-k/2} d_k J0(r) + Σ_{1≤|m|≤N} a_m J_|m|(r) e^{imθ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RpwCoefficients {
    /// `d_1 ..= d_N`.
    pub d: Vec<f64>,
    /// `a_1 ..= a_N`; `a_{-m}` is the conjugate of `a_m`.
    pub a: Vec<Complex64>,
}

impl RpwCoefficients {
    /// Draws `d_k` standard normal, then `(b_m, c_m)` with `√2 b_m`, `√2 c_m` standard normal.
    pub fn draw<R: Rng>(order: usize, rng: &mut R) -> Self {
        let d = (0..order).map(|_| StandardNormal.sample(rng)).collect();
        let a = (0..order)
            .map(|_| {
                let b: f64 = StandardNormal.sample(rng);
                let c: f64 = StandardNormal.sample(rng);
                Complex64::new(b / SQRT_2, c / SQRT_2)
            })
            .collect();
        Self { d, a }
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    /// `Σ_{k≤n} 2^{-k/2} d_k`, the coefficient of `J0` in `f_n`.
    pub fn radial_coefficient(&self, n: usize) -> f64 {
        self.d[..n].iter().enumerate().map(|(k, d)| 0.5f64.powf((k + 1) as f64 / 2.0) * d).sum()
    }

    /// `f_n(r, θ)` summed over `±m` with complex arithmetic. The imaginary part
    /// vanishes up to rounding by the conjugate pairing.
    pub fn evaluate_complex(&self, r: f64, theta: f64, n: usize) -> Complex64 {
        let mut j = Vec::new();
        bessel_j_orders(n, r, &mut j);
        let mut total = Complex64::new(self.radial_coefficient(n) * j[0], 0.0);
        for (m, (&a, &jm)) in self.a[..n].iter().zip(&j[1..=n]).enumerate() {
            let m = m + 1;
            total += a * jm * Complex64::from_polar(1.0, m as f64 * theta);
            total += a.conj() * jm * Complex64::from_polar(1.0, -(m as f64) * theta);
        }
        total
    }

    /// Real form `J0 A_n + Σ 2 J_m (b_m cos mθ - c_m sin mθ)` given precomputed `J_0 ..= J_n`.
    fn evaluate_with(&self, j: &[f64], cos: f64, sin: f64, n: usize, radial: f64) -> f64 {
        let mut total = radial * j[0];
        let (mut cm, mut sm) = (1.0, 0.0);
        for (a, jm) in self.a[..n].iter().zip(&j[1..=n]) {
            (cm, sm) = (cm * cos - sm * sin, sm * cos + cm * sin);
            total += 2.0 * jm * (a.re * cm - a.im * sm);
        }
        total
    }

    /// Real-valued `f_n(r, θ)`.
    pub fn evaluate(&self, r: f64, theta: f64, n: usize) -> f64 {
        let mut j = Vec::new();
        bessel_j_orders(n, r, &mut j);
        self.evaluate_with(&j, theta.cos(), theta.sin(), n, self.radial_coefficient(n))
    }
}

struct PolarPoint {
    ring: usize,
    cos: f64,
    sin: f64,
    radius: f64,
}

/// Evaluates truncated random plane waves on a grid, in polar coordinates about
/// the centre of the sampled region. Bessel values are cached per distinct radius.
pub struct RpwSynthesizer {
    grid: GridSpec,
    order: usize,
    points: Vec<PolarPoint>,
    /// `J_0 ..= J_order` per ring, flattened.
    bessel: Vec<f64>,
}

impl RpwSynthesizer {
    /// Requires `order ≥ rpw_truncation_order(grid)`.
    pub fn new(grid: &GridSpec, order: usize) -> Result<Self> {
        let needed = rpw_truncation_order(grid);
        if order < needed {
            return Err(Error::InvalidArgument(format!(
                "truncation order {order} is below the required {needed}; use `under_truncated` to opt in"
            )));
        }
        Self::under_truncated(grid, order)
    }

    /// Allows any positive order, for truncation studies.
    pub fn under_truncated(grid: &GridSpec, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("truncation order must be positive".into()));
        }
        let n = grid.points_per_axis();
        let half = 0.5 * grid.spacing();
        let mut rings: HashMap<u64, usize> = HashMap::new();
        let mut radii = Vec::new();
        let mut points = Vec::with_capacity(n * n);
        for row in 0..n {
            // Offsets from the centre in half steps.
            let dy = 2 * row as i64 - (n as i64 - 1);
            for col in 0..n {
                let dx = 2 * col as i64 - (n as i64 - 1);
                let key = (dx * dx + dy * dy) as u64;
                let radius = half * (key as f64).sqrt();
                let ring = *rings.entry(key).or_insert_with(|| {
                    radii.push(radius);
                    radii.len() - 1
                });
                let (cos, sin) = if key == 0 {
                    (1.0, 0.0)
                } else {
                    let r = (key as f64).sqrt();
                    (dx as f64 / r, dy as f64 / r)
                };
                points.push(PolarPoint { ring, cos, sin, radius });
            }
        }
        let mut bessel = Vec::with_capacity(radii.len() * (order + 1));
        let mut buf = Vec::new();
        for &r in &radii {
            bessel_j_orders(order, r, &mut buf);
            bessel.extend_from_slice(&buf);
        }
        Ok(Self { grid: *grid, order, points, bessel })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn ring_values(&self, ring: usize) -> &[f64] {
        let w = self.order + 1;
        &self.bessel[ring * w..(ring + 1) * w]
    }

    /// Field values of `f_n` for given coefficients (`n ≤ order`), row-major.
    pub fn evaluate(&self, coefficients: &RpwCoefficients, n: usize) -> Array2<f64> {
        let side = self.grid.points_per_axis();
        let radial = coefficients.radial_coefficient(n);
        let values: Vec<f64> = self
            .points
            .iter()
            .map(|p| coefficients.evaluate_with(self.ring_values(p.ring), p.cos, p.sin, n, radial))
            .collect();
        Array2::from_shape_vec((side, side), values).expect("grid shape")
    }

    pub fn sample(&self, seed: u64, replicate: u64) -> FieldSample {
        let coefficients = RpwCoefficients::draw(self.order, &mut rng_from_seed(seed));
        let values = self.evaluate(&coefficients, self.order);
        FieldSample { grid: self.grid, values, model_id: "rpw".into(), seed, replicate }
    }
}

/// Truncated plane wave of order `order` on `grid`, which must satisfy the truncation rule.
pub fn synthesize_rpw(grid: &GridSpec, order: usize, seed: u64) -> Result<FieldSample> {
    Ok(RpwSynthesizer::new(grid, order)?.sample(seed, 0))
}

/// `sup |f_K - f_n|` over grid points within `β n` of the centre, for each `n` in `orders`,
/// where `K` is the order of `coefficients`.
pub fn truncation_sup_errors(synth: &RpwSynthesizer, coefficients: &RpwCoefficients, orders: &[usize]) -> Vec<f64> {
    let full = coefficients.order();
    let mut sup = vec![0.0_f64; orders.len()];
    let radial_full = coefficients.radial_coefficient(full);
    let radials: Vec<f64> = orders.iter().map(|&n| coefficients.radial_coefficient(n)).collect();
    for p in &synth.points {
        let j = synth.ring_values(p.ring);
        let reference = coefficients.evaluate_with(j, p.cos, p.sin, full, radial_full);
        for (k, &n) in orders.iter().enumerate() {
            if p.radius <= TRUNCATION_BALL_FRACTION * n as f64 {
                let partial = coefficients.evaluate_with(j, p.cos, p.sin, n, radials[k]);
                sup[k] = sup[k].max((reference - partial).abs());
            }
        }
    }
    sup
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TruncationRow {
    pub order: usize,
    pub mean_sup_error: f64,
    pub log_mean_sup_error: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TruncationSweep {
    pub reference_order: usize,
    pub n_samples: usize,
    pub rows: Vec<TruncationRow>,
    /// Least-squares slope of the log error against the order.
    pub slope: f64,
}

/// Mean sup-norm truncation error of `f_n` against `f_{n_ref}`, for each `n` in `orders`.
pub fn truncation_error_sweep(
    grid: &GridSpec,
    orders: &[usize],
    reference_order: usize,
    n_samples: usize,
    seed: u64,
) -> Result<TruncationSweep> {
    let max = orders.iter().copied().max().ok_or_else(|| Error::InvalidArgument("empty order list".into()))?;
    if reference_order <= max {
        return Err(Error::InvalidArgument(format!(
            "reference order {reference_order} must exceed the largest order {max}"
        )));
    }
    if orders.contains(&0) || n_samples == 0 {
        return Err(Error::InvalidArgument("orders and sample count must be positive".into()));
    }
    let synth = RpwSynthesizer::under_truncated(grid, reference_order)?;
    let mut totals = vec![0.0; orders.len()];
    for i in 0..n_samples {
        let coefficients = RpwCoefficients::draw(reference_order, &mut rng_from_seed(seed_split(seed, i as u64)));
        for (t, e) in totals.iter_mut().zip(truncation_sup_errors(&synth, &coefficients, orders)) {
            *t += e;
        }
    }
    let rows: Vec<TruncationRow> = orders
        .iter()
        .zip(&totals)
        .map(|(&order, &t)| {
            let mean = t / n_samples as f64;
            TruncationRow { order, mean_sup_error: mean, log_mean_sup_error: mean.ln() }
        })
        .collect();
    let xs: Vec<f64> = rows.iter().map(|r| r.order as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.log_mean_sup_error).collect();
    let slope = if rows.len() >= 2 { ols(&xs, &ys).slope } else { f64::NAN };
    Ok(TruncationSweep { reference_order, n_samples, rows, slope })
}
