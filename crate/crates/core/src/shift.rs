//! The sinc-product shift `h_r` and the level-shift bounds built on it.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::FieldModel;

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// `h_r(t) = sinc(2π r t1) · sinc(2π r t2)` with `sinc(0) = 1`.
pub fn h_shift_eval(r: f64, t: [f64; 2]) -> f64 {
    sinc(2.0 * PI * r * t[0]) * sinc(2.0 * PI * r * t[1])
}

/// Upper bound `1 / (2 r √g(r))` on the Cameron–Martin norm of `h_r`.
pub fn rkhs_shift_norm_bound(model: &FieldModel, r: f64) -> Result<f64> {
    let g = model.lower_density_g(r)?;
    if !(g > 0.0) {
        return Err(Error::InvalidArgument(format!("spectral density vanishes on B({})", 2.0 * r)));
    }
    Ok(1.0 / (2.0 * r * g.sqrt()))
}

/// Total-variation bound `|a| ‖h_r‖ / √(ln 2)` between `f` and `f - a h_r`, clamped to `[0, 1]`.
pub fn tv_shift_bound(model: &FieldModel, a: f64, r: f64) -> Result<f64> {
    let norm = rkhs_shift_norm_bound(model, r)?;
    Ok((a.abs() * norm / std::f64::consts::LN_2.sqrt()).min(1.0))
}
