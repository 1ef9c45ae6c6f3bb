use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::model::FieldModel;
use crate::parallel::Workers;
use crate::stats::Moments;
use crate::topology::{ConnectivityPolicy, TopologyAnalysis};

use super::map_replicates;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DensityPoint {
    pub level: f64,
    pub c_es_hat: f64,
    pub c_es_se: f64,
    pub c_ls_hat: f64,
    pub c_ls_se: f64,
}

/// Mean contained component counts per unit window area, as a function of the level.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LevelDensityCurve {
    pub model_id: String,
    pub side: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub points: Vec<DensityPoint>,
}

/// Builds the curve from per-replicate counts; `es[i][k]` is the count of replicate `i` at level `k`.
pub fn density_curve_from_counts(levels: &[f64], area: f64, es: &[Vec<f64>], ls: &[Vec<f64>]) -> Vec<DensityPoint> {
    levels
        .iter()
        .enumerate()
        .map(|(k, &level)| {
            let e: Moments = es.iter().map(|r| r[k] / area).collect();
            let l: Moments = ls.iter().map(|r| r[k] / area).collect();
            DensityPoint {
                level,
                c_es_hat: e.mean(),
                c_es_se: e.std_error(),
                c_ls_hat: l.mean(),
                c_ls_se: l.std_error(),
            }
        })
        .collect()
}

/// Estimates `E N_ES(ℓ) / R²` and `E N_LS(ℓ) / R²` over `n_samples` replicates.
pub fn estimate_density_curve(
    model: &FieldModel,
    grid: &GridSpec,
    levels: &[f64],
    n_samples: usize,
    seed: u64,
    workers: Workers,
) -> Result<LevelDensityCurve> {
    if n_samples < 2 {
        return Err(Error::InvalidArgument("density estimation needs at least two samples".into()));
    }
    if levels.is_empty() || levels.iter().any(|l| !l.is_finite()) {
        return Err(Error::InvalidArgument("levels must be a non-empty list of finite values".into()));
    }
    let per_replicate = map_replicates(model, grid, n_samples, seed, 0, workers, |s| {
        let t = TopologyAnalysis::new(s.window(), ConnectivityPolicy::default());
        let es: Vec<f64> = levels.iter().map(|&l| t.excursion_contained(l) as f64).collect();
        let ls: Vec<f64> = levels.iter().map(|&l| t.level_set_contained(l) as f64).collect();
        (es, ls)
    })?;
    let (es, ls): (Vec<_>, Vec<_>) = per_replicate.into_iter().unzip();
    Ok(LevelDensityCurve {
        model_id: model.id(),
        side: grid.side(),
        n_samples,
        seed,
        points: density_curve_from_counts(levels, grid.area(), &es, &ls),
    })
}
