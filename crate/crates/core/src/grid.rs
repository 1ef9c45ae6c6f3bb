//! Square sampling windows and field samples on them.

use ndarray::{s, Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::model::FieldModel;

/// Square window of side `side`, sampled at spacing `spacing` with an extra
/// border of width `margin` on every edge.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GridSpec {
    side: f64,
    spacing: f64,
    margin: f64,
}

fn integer_ratio(num: f64, den: f64, what: &str) -> Result<usize> {
    let q = num / den;
    let n = q.round();
    if (q - n).abs() > 1e-9 * q.max(1.0) {
        return Err(Error::GridRule(format!("{what} ({num}) is not an integer multiple of the spacing {den}")));
    }
    Ok(n as usize)
}

impl GridSpec {
    pub fn new(side: f64, spacing: f64, margin: f64) -> Result<Self> {
        if !(side > 0.0 && side.is_finite() && spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::GridRule(format!("side {side} and spacing {spacing} must be positive")));
        }
        if !(margin >= 0.0 && margin.is_finite()) {
            return Err(Error::GridRule(format!("margin {margin} must be non-negative")));
        }
        let n = integer_ratio(side, spacing, "side")?;
        if n < 8 {
            return Err(Error::GridRule(format!("side/spacing = {n} is below the minimum of 8")));
        }
        integer_ratio(margin, spacing, "margin")?;
        Ok(Self { side, spacing, margin })
    }

    /// The coarsest admissible grid for `model`, refined so that the side is a whole number of steps.
    pub fn for_model(model: &FieldModel, side: f64, margin: f64) -> Result<Self> {
        let h_max = model.max_spacing();
        let mut steps = (side / h_max - 1e-9).ceil().max(8.0);
        if margin > 0.0 {
            // Keep the margin on the lattice as well.
            while integer_ratio(margin, side / steps, "margin").is_err() && steps < 1e7 {
                steps += 1.0;
            }
        }
        let grid = Self::new(side, side / steps, margin)?;
        grid.check_model(model)?;
        Ok(grid)
    }

    /// Checks the resolution rule `spacing ≤ h_max(model)`.
    pub fn check_model(&self, model: &FieldModel) -> Result<()> {
        let h_max = model.max_spacing();
        if self.spacing > h_max * (1.0 + 1e-12) {
            return Err(Error::GridRule(format!(
                "spacing {} exceeds the maximum {h_max} allowed for {model}",
                self.spacing
            )));
        }
        Ok(())
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// Window area `R²`.
    pub fn area(&self) -> f64 {
        self.side * self.side
    }

    /// Number of grid steps across the window.
    pub fn window_steps(&self) -> usize {
        (self.side / self.spacing).round() as usize
    }

    pub fn margin_points(&self) -> usize {
        (self.margin / self.spacing).round() as usize
    }

    /// Number of sampled points along each axis, `(R + 2 margin) / h + 1`.
    pub fn points_per_axis(&self) -> usize {
        self.window_steps() + 2 * self.margin_points() + 1
    }

    /// Physical side length of the sampled region.
    pub fn sampled_side(&self) -> f64 {
        self.side + 2.0 * self.margin
    }

    /// The same window without its margin.
    pub fn without_margin(&self) -> Self {
        Self { margin: 0.0, ..*self }
    }
}

/// A realisation of a field on a [`GridSpec`].
///
/// `values[[row, col]]` is the field at `x = col·h`, `y = row·h` measured from the
/// corner of the sampled region, so rows run along `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub grid: GridSpec,
    pub values: Array2<f64>,
    pub model_id: String,
    pub seed: u64,
    pub replicate: u64,
}

impl FieldSample {
    pub fn new(grid: GridSpec, values: Array2<f64>, model_id: String, seed: u64, replicate: u64) -> Result<Self> {
        let n = grid.points_per_axis();
        if values.dim() != (n, n) {
            return Err(Error::InvalidArgument(format!("array is {:?} but the grid needs {n}x{n}", values.dim())));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite value at flat index {i}")));
        }
        Ok(Self { grid, values, model_id, seed, replicate })
    }

    /// Values on the analysis window (the sampled region minus the margin).
    pub fn window(&self) -> ArrayView2<'_, f64> {
        let m = self.grid.margin_points();
        let n = self.grid.window_steps() + 1;
        self.values.slice(s![m..m + n, m..m + n])
    }

    /// Values on a centred sub-window enlarged by `extra` grid steps on every side, up to the margin.
    pub fn window_with_border(&self, extra: usize) -> ArrayView2<'_, f64> {
        let m = self.grid.margin_points();
        let e = extra.min(m);
        let n = self.grid.window_steps() + 1 + 2 * e;
        self.values.slice(s![m - e..m - e + n, m - e..m - e + n])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rules() {
        let g = GridSpec::new(16.0, 0.125, 1.0).unwrap();
        assert_eq!(g.window_steps(), 128);
        assert_eq!(g.margin_points(), 8);
        assert_eq!(g.points_per_axis(), 145);
        assert!(GridSpec::new(1.0, 0.125, 0.0).is_ok());
        assert!(matches!(GridSpec::new(0.5, 0.125, 0.0), Err(Error::GridRule(_))));
        assert!(matches!(GridSpec::new(1.0, 0.3, 0.0), Err(Error::GridRule(_))));
        assert!(matches!(GridSpec::new(16.0, 0.125, 0.1), Err(Error::GridRule(_))));
        let coarse = GridSpec::new(16.0, 0.25, 0.0).unwrap();
        assert!(coarse.check_model(&FieldModel::BargmannFock).is_err());
        assert!(coarse.check_model(&FieldModel::RandomPlaneWave).is_ok());
    }

    #[test]
    fn grid_for_model() {
        let g = GridSpec::for_model(&FieldModel::BargmannFock, 16.0, 0.0).unwrap();
        assert_eq!(g.spacing(), 0.125);
        let g = GridSpec::for_model(&FieldModel::RandomPlaneWave, 8.0, 0.0).unwrap();
        assert_eq!(g.window_steps(), 21);
        assert!(g.spacing() <= 2.0 * std::f64::consts::PI / 16.0);
        let g = GridSpec::for_model(&FieldModel::BargmannFock, 10.0, 1.0).unwrap();
        assert_eq!(g.margin_points(), 8);
    }

    #[test]
    fn window_views() {
        let g = GridSpec::new(1.0, 0.125, 0.25).unwrap();
        let n = g.points_per_axis();
        let values = Array2::from_shape_fn((n, n), |(i, j)| (i * n + j) as f64);
        let s = FieldSample::new(g, values, "bargmann-fock".into(), 0, 0).unwrap();
        let w = s.window();
        assert_eq!(w.dim(), (9, 9));
        assert_eq!(w[[0, 0]], (2 * n + 2) as f64);
        assert_eq!(s.window_with_border(1).dim(), (11, 11));
        assert_eq!(s.window_with_border(5).dim(), (13, 13));
    }
}
