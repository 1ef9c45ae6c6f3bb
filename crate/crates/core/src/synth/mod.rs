//! Sampling fields on grids.

mod rpw;
mod spectral;
mod validate;

pub use rpw::{
    rpw_truncation_order, synthesize_rpw, truncation_error_sweep, truncation_sup_errors, RpwCoefficients,
    RpwSynthesizer, TruncationRow, TruncationSweep, TRUNCATION_BALL_FRACTION,
};
pub use spectral::{synthesize_spectral, SpectralSynthesizer};
pub use validate::{empirical_covariance, normality_check, CovarianceRow, NormalityCheck};

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::grid::{FieldSample, GridSpec};
use crate::model::FieldModel;
use crate::seed::{rng_from_seed, seed_split};

/// Adds `√mass · Z` to every value, with `Z` a single standard normal drawn from `seed`.
pub fn add_constant_atom(mut sample: FieldSample, mass: f64, seed: u64) -> Result<FieldSample> {
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::InvalidArgument(format!("atom mass must be positive, got {mass}")));
    }
    let z: f64 = StandardNormal.sample(&mut rng_from_seed(seed));
    let shift = mass.sqrt() * z;
    sample.values.mapv_inplace(|v| v + shift);
    Ok(sample)
}

enum Engine {
    Spectral(SpectralSynthesizer),
    Rpw(RpwSynthesizer),
}

/// Sampler for any catalogue model on a fixed grid. Precomputes everything that
/// does not depend on the seed, so one instance serves many replicates.
pub struct Synthesizer {
    engine: Engine,
    atom: f64,
    model_id: String,
}

impl Synthesizer {
    pub fn new(model: &FieldModel, grid: &GridSpec) -> Result<Self> {
        grid.check_model(model)?;
        let engine = match model.base() {
            FieldModel::RandomPlaneWave => Engine::Rpw(RpwSynthesizer::new(grid, rpw_truncation_order(grid))?),
            base => Engine::Spectral(SpectralSynthesizer::new(base, grid)?),
        };
        Ok(Self { engine, atom: model.atom_mass(), model_id: model.id() })
    }

    /// Sample for replicate `replicate` drawn from `seed`. The atom, if any, uses the derived seed `seed_split(seed, 1)`.
    pub fn sample(&self, seed: u64, replicate: u64) -> FieldSample {
        let mut sample = match &self.engine {
            Engine::Spectral(s) => s.sample(seed, replicate),
            Engine::Rpw(s) => s.sample(seed, replicate),
        };
        sample.model_id.clone_from(&self.model_id);
        if self.atom > 0.0 {
            sample = add_constant_atom(sample, self.atom, seed_split(seed, 1)).expect("positive atom mass");
        }
        sample
    }
}

/// One-shot sampling of any catalogue model.
pub fn synthesize(model: &FieldModel, grid: &GridSpec, seed: u64) -> Result<FieldSample> {
    Ok(Synthesizer::new(model, grid)?.sample(seed, 0))
}
