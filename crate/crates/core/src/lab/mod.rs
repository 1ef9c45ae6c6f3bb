//! Monte Carlo experiments on component counts.

mod density;
mod divergence;
mod fluctuation;
mod identity;
mod paired;
mod scaling;

pub use density::{density_curve_from_counts, estimate_density_curve, LevelDensityCurve};
pub use divergence::{kl_tv_gaussian_scaled, rpw_level_coupling_bound, KlTv};
pub use fluctuation::{chatterjee_bound_check, fluctuation_window_test, ChatterjeeReport, FluctuationTest};
pub use identity::{identity_from_replicates, integral_identity_check, IdentityReport, IdentitySide};
pub use paired::{paired_from_differences, paired_level_experiment, PairedLevelReport, PairedRow, ShiftRule};
pub use scaling::{
    scaling_fit_from_counts, variance_scaling_fit, ScalingFit, ScalingPoint, MIN_LADDER, MIN_REPLICATES,
};

use crate::error::Result;
use crate::grid::{FieldSample, GridSpec};
use crate::model::FieldModel;
use crate::parallel::{parallel_map, Workers};
use crate::seed::replicate_seed;
use crate::synth::Synthesizer;

/// Seeds of the `n` replicates in `stream`.
pub fn replicate_seeds(master: u64, stream: u64, n: usize) -> Vec<u64> {
    (0..n as u64).map(|i| replicate_seed(master, stream, i)).collect()
}

/// Synthesizes `n` replicates of `model` on `grid` and applies `f` to each.
pub fn map_replicates<T, F>(
    model: &FieldModel,
    grid: &GridSpec,
    n: usize,
    master: u64,
    stream: u64,
    workers: Workers,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&FieldSample) -> T + Sync,
{
    let synth = Synthesizer::new(model, grid)?;
    let seeds = replicate_seeds(master, stream, n);
    Ok(parallel_map(n, workers, |i| f(&synth.sample(seeds[i], i as u64))))
}
