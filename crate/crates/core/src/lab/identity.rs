use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::model::FieldModel;
use crate::parallel::Workers;
use crate::stats::Moments;
use crate::topology::{ConnectivityPolicy, TopologyAnalysis};

use super::map_replicates;

/// One side of the identity: change in density against the critical point predictor.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct IdentitySide {
    /// `ĉ(a) - ĉ(b)`.
    pub lhs: f64,
    /// Mean predictor count per unit area.
    pub rhs: f64,
    pub difference: f64,
    /// Standard error of the paired per-replicate difference.
    pub joint_se: f64,
    /// `3 · joint_se + 5 / R`.
    pub allowance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct IdentityReport {
    pub model_id: String,
    pub side: f64,
    pub a: f64,
    pub b: f64,
    pub n_samples: usize,
    pub seed: u64,
    /// Excursion sets against `m+ - s-`.
    pub excursion: IdentitySide,
    /// Level sets against `m+ - s- + s+ - m-`.
    pub level_set: IdentitySide,
}

fn side_from(pairs: &[(f64, f64)], area: f64, side: f64) -> IdentitySide {
    let lhs: Moments = pairs.iter().map(|p| p.0 / area).collect();
    let rhs: Moments = pairs.iter().map(|p| p.1 / area).collect();
    let diff: Moments = pairs.iter().map(|p| (p.0 - p.1) / area).collect();
    let joint_se = if diff.count() > 1 { diff.std_error() } else { 0.0 };
    let allowance = 3.0 * joint_se + 5.0 / side;
    let difference = lhs.mean() - rhs.mean();
    IdentitySide {
        lhs: lhs.mean(),
        rhs: rhs.mean(),
        difference,
        joint_se,
        allowance,
        pass: difference.abs() <= allowance,
    }
}

/// Per-replicate `(Δ, predictor)` pairs for the excursion and level-set identities.
pub fn identity_from_replicates(
    excursion: &[(f64, f64)],
    level_set: &[(f64, f64)],
    side: f64,
) -> (IdentitySide, IdentitySide) {
    let area = side * side;
    (side_from(excursion, area, side), side_from(level_set, area, side))
}

/// Compares `ĉ(a) - ĉ(b)` with the mean critical point balance over `[a, b]`, on one replicate set.
pub fn integral_identity_check(
    model: &FieldModel,
    grid: &GridSpec,
    a: f64,
    b: f64,
    n_samples: usize,
    seed: u64,
    workers: Workers,
) -> Result<IdentityReport> {
    if !(a <= b) {
        return Err(Error::InvalidArgument(format!("identity window needs a <= b, got [{a}, {b}]")));
    }
    if n_samples < 2 {
        return Err(Error::InvalidArgument("identity check needs at least two samples".into()));
    }
    let balances = map_replicates(model, grid, n_samples, seed, 0, workers, |s| {
        TopologyAnalysis::new(s.window(), ConnectivityPolicy::default()).morse_balance(a, b)
    })?;
    let mut es = Vec::with_capacity(n_samples);
    let mut ls = Vec::with_capacity(n_samples);
    for m in balances {
        let m = m?;
        es.push((m.delta as f64, m.predictor as f64));
        ls.push((m.delta_level as f64, m.predictor_level as f64));
    }
    let (excursion, level_set) = identity_from_replicates(&es, &ls, grid.side());
    Ok(IdentityReport { model_id: model.id(), side: grid.side(), a, b, n_samples, seed, excursion, level_set })
}
