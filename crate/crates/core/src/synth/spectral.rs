//! FFT synthesis on a periodic torus enclosing the sampled region.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::Array2;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{FieldSample, GridSpec};
use crate::model::{FieldModel, PowerLawSpectrum};
use crate::quad::integrate;
use crate::seed::rng_from_seed;

/// Distance beyond which `exp(-d²/2) < 1e-6`.
const BF_WRAP_DISTANCE: f64 = 5.257_349_800_152_301;

/// Sub-cells per axis when a cell of a singular density is integrated.
const SUBCELLS: usize = 8;

/// Sampler for models with an absolutely continuous spectrum.
///
/// Independent complex normals weighted by the square root of the spectral mass of
/// each frequency cell go through an inverse 2-D FFT; the real part is a stationary
/// field on the torus whose covariance is the periodisation of `κ`.
pub struct SpectralSynthesizer {
    grid: GridSpec,
    model_id: String,
    n_fft: usize,
    weights: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

fn is_smooth(mut n: usize) -> bool {
    for p in [2, 3, 5, 7] {
        while n.is_multiple_of(p) {
            n /= p;
        }
    }
    n == 1
}

fn next_smooth(n: usize) -> usize {
    (n.max(1)..).find(|&m| is_smooth(m)).expect("smooth numbers are unbounded")
}

/// `∫_{[-1/2,1/2]²} |u|^-α du`.
fn unit_cell_singular_mass(alpha: f64) -> f64 {
    8.0 * integrate(|th| (0.5 / th.cos()).powf(2.0 - alpha) / (2.0 - alpha), 0.0, PI / 4.0, 8)
}

impl SpectralSynthesizer {
    pub fn new(model: &FieldModel, grid: &GridSpec) -> Result<Self> {
        let singular = match model {
            FieldModel::BargmannFock => None,
            FieldModel::PowerLaw(p) => Some(*p),
            other => {
                return Err(Error::InvalidArgument(format!(
                    "spectral synthesis needs a model with a spectral density, got {other}"
                )))
            }
        };
        let h = grid.spacing();
        let n_out = grid.points_per_axis();
        let min_len = match singular {
            None => grid.sampled_side() + BF_WRAP_DISTANCE,
            Some(_) => 4.0 * grid.sampled_side(),
        };
        let n_fft = next_smooth(n_out.max((min_len / h).ceil() as usize));
        let len = n_fft as f64 * h;

        let freq = |q: usize| -> i64 {
            if q <= n_fft / 2 {
                q as i64
            } else {
                q as i64 - n_fft as i64
            }
        };
        let cell = 1.0 / (len * len);
        let mut weights = vec![0.0; n_fft * n_fft];
        let mut most_negative = 0.0_f64;
        for qy in 0..n_fft {
            let ky = freq(qy);
            for qx in 0..n_fft {
                let kx = freq(qx);
                let mass = match singular {
                    Some(p) => cell_mass(&p, kx, ky, len),
                    _ => model.spectral_density([kx as f64 / len, ky as f64 / len])? * cell,
                };
                if !(mass >= 0.0) {
                    most_negative = most_negative.min(if mass.is_nan() { f64::NEG_INFINITY } else { mass });
                }
                weights[qy * n_fft + qx] = mass.max(0.0).sqrt();
            }
        }
        if most_negative < 0.0 {
            return Err(Error::Embedding(most_negative));
        }
        let fft = FftPlanner::new().plan_fft_inverse(n_fft);
        Ok(Self { grid: *grid, model_id: model.id(), n_fft, weights, fft })
    }

    /// Side length of the periodic domain.
    pub fn periodic_length(&self) -> f64 {
        self.n_fft as f64 * self.grid.spacing()
    }

    /// Total spectral mass captured by the frequency lattice (the variance of every value).
    pub fn captured_variance(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum()
    }

    pub fn sample(&self, seed: u64, replicate: u64) -> FieldSample {
        let n = self.n_fft;
        let mut rng = rng_from_seed(seed);
        let mut buf: Vec<Complex64> = self
            .weights
            .iter()
            .map(|&w| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(w * re, w * im)
            })
            .collect();

        let mut scratch = vec![Complex64::default(); self.fft.get_inplace_scratch_len()];
        self.fft.process_with_scratch(&mut buf, &mut scratch);

        let n_out = self.grid.points_per_axis();
        let mut values = Array2::zeros((n_out, n_out));
        let mut column = vec![Complex64::default(); n];
        for col in 0..n_out {
            for (row, c) in column.iter_mut().enumerate() {
                *c = buf[row * n + col];
            }
            self.fft.process_with_scratch(&mut column, &mut scratch);
            for row in 0..n_out {
                values[[row, col]] = column[row].re;
            }
        }
        FieldSample { grid: self.grid, values, model_id: self.model_id.clone(), seed, replicate }
    }
}

/// Spectral mass of one frequency cell of a power-law density, zero when the cell
/// misses the support.
fn cell_mass(p: &PowerLawSpectrum, kx: i64, ky: i64, len: f64) -> f64 {
    let du = 1.0 / len;
    let centre = (kx as f64).hypot(ky as f64) * du;
    if centre - 0.5 * std::f64::consts::SQRT_2 * du >= 2.0 * p.cutoff() {
        return 0.0;
    }
    if kx == 0 && ky == 0 && 0.5 * std::f64::consts::SQRT_2 * du < p.cutoff() {
        let alpha = p.exponent();
        return du.powf(2.0 - alpha) * unit_cell_singular_mass(alpha) / p.raw_mass();
    }
    let sub = du / SUBCELLS as f64;
    let mut total = 0.0;
    for i in 0..SUBCELLS {
        for j in 0..SUBCELLS {
            let tx = (kx as f64 - 0.5) * du + (i as f64 + 0.5) * sub;
            let ty = (ky as f64 - 0.5) * du + (j as f64 + 0.5) * sub;
            total += p.radial(tx.hypot(ty));
        }
    }
    total * sub * sub
}

/// One-shot spectral synthesis.
pub fn synthesize_spectral(model: &FieldModel, grid: &GridSpec, seed: u64) -> Result<FieldSample> {
    grid.check_model(model)?;
    Ok(SpectralSynthesizer::new(model, grid)?.sample(seed, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_sizes() {
        assert_eq!(next_smooth(97), 98);
        assert_eq!(next_smooth(121), 125);
        assert!(is_smooth(2 * 3 * 5 * 7 * 64));
        assert!(!is_smooth(11));
    }

    #[test]
    fn singular_cell_mass() {
        // α = 1: ∫ over the unit square of 1/|u| is 4 ln(1 + √2).
        let exact = 4.0 * (1.0 + 2f64.sqrt()).ln();
        assert!((unit_cell_singular_mass(1.0) - exact).abs() < 1e-12);
    }

    #[test]
    fn deterministic() {
        let grid = GridSpec::new(4.0, 0.125, 0.5).unwrap();
        let a = synthesize_spectral(&FieldModel::BargmannFock, &grid, 11).unwrap();
        let b = synthesize_spectral(&FieldModel::BargmannFock, &grid, 11).unwrap();
        let c = synthesize_spectral(&FieldModel::BargmannFock, &grid, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.values, c.values);
        assert_eq!(a.values.dim(), (41, 41));
    }

    #[test]
    fn lattice_captures_unit_variance() {
        let grid = GridSpec::new(4.0, 0.125, 0.0).unwrap();
        let s = SpectralSynthesizer::new(&FieldModel::BargmannFock, &grid).unwrap();
        assert!((s.captured_variance() - 1.0).abs() < 1e-12);
        assert!(s.periodic_length() >= 4.0 + BF_WRAP_DISTANCE);
        let p = FieldModel::power_law(1.0, 0.25).unwrap();
        let s = SpectralSynthesizer::new(&p, &grid).unwrap();
        assert!((s.captured_variance() - 1.0).abs() < 5e-4, "{}", s.captured_variance());
    }

    #[test]
    fn rejects_models_without_density() {
        let grid = GridSpec::new(4.0, 0.125, 0.0).unwrap();
        assert!(SpectralSynthesizer::new(&FieldModel::RandomPlaneWave, &grid).is_err());
        let coarse = GridSpec::new(4.0, 0.5, 0.0).unwrap();
        assert!(matches!(synthesize_spectral(&FieldModel::BargmannFock, &coarse, 0), Err(Error::GridRule(_))));
    }
}
