//! Monte Carlo checks of synthesized samples against their target law.

use crate::error::{Error, Result};
use crate::grid::FieldSample;

/// One row of an empirical covariance table.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CovarianceRow {
    pub lag_x: f64,
    pub lag_y: f64,
    pub kappa_hat: f64,
    pub se: f64,
    pub n: usize,
}

/// Cross-replicate covariance between two grid points separated by each lag.
///
/// The pair is placed symmetrically about the centre of the sampled region and the
/// lag is canonicalised so that `L` and `-L` give the same estimator.
pub fn empirical_covariance(samples: &[FieldSample], lags: &[[f64; 2]]) -> Result<Vec<CovarianceRow>> {
    if samples.len() < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let first = &samples[0];
    if samples.iter().any(|s| s.grid != first.grid || s.model_id != first.model_id) {
        return Err(Error::InvalidArgument("samples differ in grid or model".into()));
    }
    let h = first.grid.spacing();
    let size = first.grid.points_per_axis() as i64;
    let centre = (size - 1) / 2;
    let mut rows = Vec::with_capacity(lags.len());
    for &lag in lags {
        let mut steps = [0i64; 2];
        for (k, &l) in lag.iter().enumerate() {
            let q = l / h;
            if (q - q.round()).abs() > 1e-9 * q.abs().max(1.0) {
                return Err(Error::InvalidArgument(format!("lag component {l} is not a multiple of the spacing {h}")));
            }
            steps[k] = q.round() as i64;
        }
        if steps[1] < 0 || (steps[1] == 0 && steps[0] < 0) {
            steps = [-steps[0], -steps[1]];
        }
        let start = [centre - steps[0].div_euclid(2), centre - steps[1].div_euclid(2)];
        let end = [start[0] + steps[0], start[1] + steps[1]];
        if start.iter().chain(&end).any(|&i| i < 0 || i >= size) {
            return Err(Error::InvalidArgument(format!("lag {lag:?} does not fit on the grid")));
        }
        let xs: Vec<f64> = samples.iter().map(|s| s.values[[start[1] as usize, start[0] as usize]]).collect();
        let ys: Vec<f64> = samples.iter().map(|s| s.values[[end[1] as usize, end[0] as usize]]).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let products: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).collect();
        let kappa_hat = products.iter().sum::<f64>() / (n - 1.0);
        let mp = products.iter().sum::<f64>() / n;
        let var_p = products.iter().map(|p| (p - mp) * (p - mp)).sum::<f64>() / (n - 1.0);
        rows.push(CovarianceRow {
            lag_x: steps[0] as f64 * h,
            lag_y: steps[1] as f64 * h,
            kappa_hat,
            se: (var_p / n).sqrt(),
            n: xs.len(),
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct NormalityCheck {
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub se_skewness: f64,
    pub se_kurtosis: f64,
    /// Both statistics within 5 standard errors of zero.
    pub pass: bool,
}

/// Moment-based normality smoke test.
pub fn normality_check(values: &[f64]) -> NormalityCheck {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for v in values {
        let d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    let (m2, m3, m4) = (m2 / n, m3 / n, m4 / n);
    let skewness = m3 / m2.powf(1.5);
    let excess_kurtosis = m4 / (m2 * m2) - 3.0;
    let se_skewness = (6.0 / n).sqrt();
    let se_kurtosis = (24.0 / n).sqrt();
    let pass = skewness.abs() <= 5.0 * se_skewness && excess_kurtosis.abs() <= 5.0 * se_kurtosis;
    NormalityCheck { skewness, excess_kurtosis, se_skewness, se_kurtosis, pass }
}
