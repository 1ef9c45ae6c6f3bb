use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct KlTv {
    pub kl: f64,
    /// Pinsker bound `min(1, √(kl / 2))`.
    pub tv_bound: f64,
}

/// `KL(N(0, s² I_k) ‖ N(0, I_k)) = (k/2)(s² - 1 - ln s²)` and its Pinsker bound.
pub fn kl_tv_gaussian_scaled(k: u64, s: f64) -> Result<KlTv> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidArgument(format!("scale must be positive, got {s}")));
    }
    let s2 = s * s;
    let kl = 0.5 * k as f64 * (s2 - 1.0 - s2.ln());
    Ok(KlTv { kl, tv_bound: (kl / 2.0).sqrt().min(1.0) })
}

/// Pinsker bound on the total variation between `3m` independent coefficients at
/// level `ℓ` and at `ℓ + a`, with `m = ⌈2√2 R⌉`.
pub fn rpw_level_coupling_bound(level: f64, a: f64, side: f64) -> Result<f64> {
    if level == 0.0 {
        return Err(Error::InvalidArgument("the nodal level 0 is excluded".into()));
    }
    if level + a == 0.0 {
        return Err(Error::InvalidArgument("shifted level must be non-zero".into()));
    }
    if !(side > 0.0) {
        return Err(Error::InvalidArgument(format!("window size must be positive, got {side}")));
    }
    let m = (2.0 * SQRT_2 * side).ceil() as u64;
    Ok(kl_tv_gaussian_scaled(3 * m, level / (level + a))?.tv_bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert_eq!(kl_tv_gaussian_scaled(5, 1.0).unwrap(), KlTv { kl: 0.0, tv_bound: 0.0 });
        let r = kl_tv_gaussian_scaled(2, 0.9).unwrap();
        assert!((r.kl - (0.81 - 1.0 - 0.81f64.ln())).abs() < 1e-15);
        assert!((r.kl - 0.02072).abs() < 1e-5);
        assert!((r.tv_bound - 0.1018).abs() < 1e-4);
        assert!(kl_tv_gaussian_scaled(1, 0.0).is_err());
    }

    #[test]
    fn coupling_bound() {
        assert_eq!(rpw_level_coupling_bound(1.0, 0.0, 10.0).unwrap(), 0.0);
        assert!(rpw_level_coupling_bound(0.0, 0.1, 10.0).is_err());
        assert!(rpw_level_coupling_bound(1.0, -1.0, 10.0).is_err());
        let b = rpw_level_coupling_bound(1.0, 0.5, 10.0).unwrap();
        assert!(b > 0.0 && b <= 1.0);
        // k enters only through its total: 3m = m + 2m.
        let m = 29;
        let s: f64 = 1.0 / 1.5;
        let split = kl_tv_gaussian_scaled(m, s).unwrap().kl + kl_tv_gaussian_scaled(2 * m, s).unwrap().kl;
        assert!((split - kl_tv_gaussian_scaled(3 * m, s).unwrap().kl).abs() < 1e-12);
    }
}
