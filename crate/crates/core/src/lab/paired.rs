use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::model::FieldModel;
use crate::parallel::Workers;
use crate::topology::{count_excursion_components, ConnectivityPolicy};

use super::map_replicates;

/// Level shift `a_R` as a function of the window size.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum ShiftRule {
    /// `c / R`.
    InverseR { c: f64 },
    /// `c / √R`.
    InverseSqrtR { c: f64 },
    /// `c √g(1/R) / R`.
    SingularSpectrum { c: f64 },
    /// The same shift at every size.
    Fixed { a: f64 },
}

impl ShiftRule {
    pub fn shift(&self, model: &FieldModel, side: f64) -> Result<f64> {
        Ok(match *self {
            ShiftRule::InverseR { c } => c / side,
            ShiftRule::InverseSqrtR { c } => c / side.sqrt(),
            ShiftRule::SingularSpectrum { c } => c * model.lower_density_g(1.0 / side)?.sqrt() / side,
            ShiftRule::Fixed { a } => a,
        })
    }

    /// Parses the config names `inv-r`, `inv-sqrt-r`, `singular` and `fixed`.
    pub fn from_name(name: &str, c: f64) -> Result<Self> {
        match name {
            "inv-r" => Ok(ShiftRule::InverseR { c }),
            "inv-sqrt-r" => Ok(ShiftRule::InverseSqrtR { c }),
            "singular" => Ok(ShiftRule::SingularSpectrum { c }),
            "fixed" => Ok(ShiftRule::Fixed { a: c }),
            other => Err(Error::Config(format!("unknown shift rule `{other}`"))),
        }
    }
}

/// Statistics of `ΔN = N_ES(ℓ) - N_ES(ℓ + a_R)` at one window size.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PairedRow {
    pub side: f64,
    pub shift: f64,
    pub n: usize,
    pub mean_abs: f64,
    pub mean: f64,
    pub mean_sq: f64,
    /// `(E|ΔN|)² / E(ΔN²)`, undefined when `ΔN` vanishes identically.
    pub paley_zygmund: Option<f64>,
    /// `E|ΔN| / (R² a_R)`.
    pub normalized_abs: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PairedLevelReport {
    pub model_id: String,
    pub level: f64,
    pub rule: ShiftRule,
    pub seed: u64,
    pub rows: Vec<PairedRow>,
}

pub fn paired_from_differences(side: f64, shift: f64, diffs: &[f64]) -> PairedRow {
    let n = diffs.len() as f64;
    let mean_abs = diffs.iter().map(|d| d.abs()).sum::<f64>() / n;
    let mean = diffs.iter().sum::<f64>() / n;
    let mean_sq = diffs.iter().map(|d| d * d).sum::<f64>() / n;
    PairedRow {
        side,
        shift,
        n: diffs.len(),
        mean_abs,
        mean,
        mean_sq,
        paley_zygmund: (mean_sq > 0.0).then(|| mean_abs * mean_abs / mean_sq),
        normalized_abs: (shift != 0.0).then(|| mean_abs / (side * side * shift)),
    }
}

/// Counts at `ℓ` and `ℓ + a_R` on the same sample, across a ladder of window sizes.
pub fn paired_level_experiment(
    model: &FieldModel,
    level: f64,
    rule: ShiftRule,
    sides: &[f64],
    n_per_side: usize,
    seed: u64,
    workers: Workers,
) -> Result<PairedLevelReport> {
    if sides.is_empty() || n_per_side == 0 {
        return Err(Error::InvalidArgument("paired experiment needs window sizes and replicates".into()));
    }
    let fg = ConnectivityPolicy::default().foreground();
    let mut rows = Vec::with_capacity(sides.len());
    for (j, &side) in sides.iter().enumerate() {
        let shift = rule.shift(model, side)?;
        if !(shift >= 0.0 && shift.is_finite()) {
            return Err(Error::InvalidArgument(format!("shift rule gave {shift} at side {side}")));
        }
        let grid = GridSpec::for_model(model, side, 0.0)?;
        let diffs = map_replicates(model, &grid, n_per_side, seed, j as u64, workers, |s| {
            let w = s.window();
            count_excursion_components(w, level, fg).0 as f64
                - count_excursion_components(w, level + shift, fg).0 as f64
        })?;
        rows.push(paired_from_differences(side, shift, &diffs));
    }
    Ok(PairedLevelReport { model_id: model.id(), level, rule, seed, rows })
}
