use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::model::FieldModel;
use crate::parallel::Workers;
use crate::seed::seed_split;
use crate::stats::{bootstrap_variance_ci, mean, sample_variance, sample_variance_se, weighted_least_squares};
use crate::topology::{count_excursion_components, ConnectivityPolicy};

use super::map_replicates;

/// Minimum number of window sizes in a ladder.
pub const MIN_LADDER: usize = 4;
/// Minimum replicates per window size.
pub const MIN_REPLICATES: usize = 200;
const BOOTSTRAP_RESAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ScalingPoint {
    pub side: f64,
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    /// 95% percentile bootstrap interval of the variance.
    pub ci_low: f64,
    pub ci_high: f64,
    /// Delta-method standard error of `ln variance`.
    pub log_variance_se: f64,
}

/// Power-law fit `Var N_ES(R) ∝ R^exponent` across a ladder of window sizes.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ScalingFit {
    pub model_id: String,
    pub level: f64,
    pub n_per_side: usize,
    pub seed: u64,
    pub points: Vec<ScalingPoint>,
    pub exponent: f64,
    pub exponent_se: f64,
    pub intercept: f64,
}

fn check_ladder(sides: &[f64]) -> Result<()> {
    if sides.len() < MIN_LADDER {
        return Err(Error::InvalidArgument(format!(
            "a scaling ladder needs at least {MIN_LADDER} window sizes, got {}",
            sides.len()
        )));
    }
    if sides.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("window sizes must be strictly increasing".into()));
    }
    Ok(())
}

/// Fits the exponent from per-side count samples; `counts[j]` belongs to `sides[j]`.
pub fn scaling_fit_from_counts(
    model_id: &str,
    level: f64,
    sides: &[f64],
    counts: &[Vec<f64>],
    seed: u64,
) -> Result<ScalingFit> {
    check_ladder(sides)?;
    if counts.len() != sides.len() {
        return Err(Error::InvalidArgument("one count sample per window size is required".into()));
    }
    let mut points = Vec::with_capacity(sides.len());
    for (j, (&side, c)) in sides.iter().zip(counts).enumerate() {
        if c.len() < 2 {
            return Err(Error::InvalidArgument(format!("need at least two counts at side {side}")));
        }
        let variance = sample_variance(c);
        if !(variance > 0.0) {
            return Err(Error::ZeroVariance(side));
        }
        let (ci_low, ci_high) =
            bootstrap_variance_ci(c, BOOTSTRAP_RESAMPLES, seed_split(seed, u64::MAX - j as u64), 0.95);
        let log_variance_se = (sample_variance_se(c) / variance).max(f64::MIN_POSITIVE);
        points.push(ScalingPoint { side, n: c.len(), mean: mean(c), variance, ci_low, ci_high, log_variance_se });
    }
    let x: Vec<f64> = points.iter().map(|p| p.side.ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.variance.ln()).collect();
    let w: Vec<f64> = points.iter().map(|p| p.log_variance_se.powi(-2)).collect();
    let fit = weighted_least_squares(&x, &y, &w);
    Ok(ScalingFit {
        model_id: model_id.to_string(),
        level,
        n_per_side: counts.iter().map(Vec::len).min().unwrap_or(0),
        seed,
        points,
        exponent: fit.slope,
        exponent_se: fit.slope_se,
        intercept: fit.intercept,
    })
}

/// Samples contained excursion counts at `level` on each window size and fits the variance exponent.
pub fn variance_scaling_fit(
    model: &FieldModel,
    level: f64,
    sides: &[f64],
    n_per_side: usize,
    seed: u64,
    workers: Workers,
) -> Result<ScalingFit> {
    check_ladder(sides)?;
    if n_per_side < MIN_REPLICATES {
        return Err(Error::InvalidArgument(format!(
            "at least {MIN_REPLICATES} replicates per window size are required, got {n_per_side}"
        )));
    }
    let policy = ConnectivityPolicy::default();
    let mut counts = Vec::with_capacity(sides.len());
    for (j, &side) in sides.iter().enumerate() {
        let grid = GridSpec::for_model(model, side, 0.0)?;
        counts.push(map_replicates(model, &grid, n_per_side, seed, j as u64, workers, |s| {
            count_excursion_components(s.window(), level, policy.foreground()).0 as f64
        })?);
    }
    scaling_fit_from_counts(&model.id(), level, sides, &counts, seed)
}
