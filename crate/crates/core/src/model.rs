//! Catalogue of stationary planar Gaussian field models.
//!
//! Fourier convention: `κ(x) = ∫ exp(2πi t·x) dμ(t)`. Every model except the
//! atom variant has unit variance.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::bessel::bessel_j0;
use crate::error::{Error, Result};
use crate::quad::integrate;

/// Radially symmetric spectral density with a `|t|^-α` singularity at the origin.
///
/// The shape is `|t|^-α` on `|t| < r0`, rolled off by `cos²(π(|t| - r0) / (2 r0))`
/// on `[r0, 2 r0]` and zero beyond, then divided by its total mass so that `κ(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawSpectrum {
    exponent: f64,
    cutoff: f64,
    mass: f64,
}

impl PowerLawSpectrum {
    pub fn new(exponent: f64, cutoff: f64) -> Result<Self> {
        if !(exponent > 0.0 && exponent < 2.0) {
            return Err(Error::InvalidArgument(format!("power-law exponent must lie in (0, 2), got {exponent}")));
        }
        if !(cutoff > 0.0 && cutoff.is_finite()) {
            return Err(Error::InvalidArgument(format!("power-law cutoff must be positive, got {cutoff}")));
        }
        let core = cutoff.powf(2.0 - exponent) / (2.0 - exponent);
        let taper = integrate(|s| s * Self::shape(exponent, cutoff, s), cutoff, 2.0 * cutoff, 32);
        let mass = 2.0 * PI * (core + taper);
        Ok(Self { exponent, cutoff, mass })
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Total mass of the un-normalised shape.
    pub fn raw_mass(&self) -> f64 {
        self.mass
    }

    fn shape(alpha: f64, r0: f64, s: f64) -> f64 {
        if s < r0 {
            s.powf(-alpha)
        } else if s <= 2.0 * r0 {
            let c = (PI * (s - r0) / (2.0 * r0)).cos();
            s.powf(-alpha) * c * c
        } else {
            0.0
        }
    }

    /// Normalised density at radius `s`.
    pub fn radial(&self, s: f64) -> f64 {
        Self::shape(self.exponent, self.cutoff, s) / self.mass
    }

    /// `∫_0^{2 r0} s ρ(s) w(s) ds` for a smooth weight `w`.
    fn radial_integral<F: Fn(f64) -> f64>(&self, w: F, panels: usize) -> f64 {
        let (alpha, r0) = (self.exponent, self.cutoff);
        // On the core substitute s = r0 v^{1/(2-α)}, which absorbs the singular factor s^{1-α}.
        let p = 1.0 / (2.0 - alpha);
        let core = r0.powf(2.0 - alpha) / (2.0 - alpha) * integrate(|v| w(r0 * v.powf(p)), 0.0, 1.0, panels);
        let taper = integrate(|s| s * Self::shape(alpha, r0, s) * w(s), r0, 2.0 * r0, panels);
        (core + taper) / self.mass
    }

    /// Covariance at distance `r` by Hankel transform of the density.
    pub fn covariance(&self, r: f64) -> f64 {
        let panels = 16 + (8.0 * self.cutoff * r).ceil() as usize;
        2.0 * PI * self.radial_integral(|s| bessel_j0(2.0 * PI * s * r), panels)
    }

    /// `∫ |t|^{2n} ρ(t) dt`.
    fn moment(&self, n: i32) -> f64 {
        2.0 * PI * self.radial_integral(|s| s.powi(2 * n), 64)
    }
}

/// A stationary Gaussian field model on the plane.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldModel {
    /// `κ(x) = exp(-|x|²/2)`.
    BargmannFock,
    /// `κ(x) = J0(|x|)`; spectral measure uniform on the circle of radius `1/(2π)`.
    RandomPlaneWave,
    PowerLaw(PowerLawSpectrum),
    /// `f = g + √mass · Z` for a base field `g` and an independent standard normal `Z`.
    AtomPlus {
        mass: f64,
        base: Box<FieldModel>,
    },
}

/// Second and fourth derivatives of `κ` at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginDerivatives {
    /// `∂^(2,0) κ(0)`
    pub d20: f64,
    /// `∂^(4,0) κ(0)`
    pub d40: f64,
    /// `∂^(1,1) κ(0)`
    pub d11: f64,
}

impl OriginDerivatives {
    pub fn chi(&self) -> Result<f64> {
        if !self.d40.is_finite() || !self.d20.is_finite() || self.d40 <= 0.0 {
            return Err(Error::NonFiniteDerivative);
        }
        Ok(-(3.0_f64).sqrt() * self.d20 / self.d40.sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizationFlag {
    /// Variance is `1 + mass` by construction of the atom model.
    AtomNormalized,
    NonUnitVariance,
    Anisotropic,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct NormalizationReport {
    pub variance: f64,
    /// Scalar `c` in `Cov(∇f) = c I₂`.
    pub gradient_variance: f64,
    /// `∂^(1,1) κ(0)`, zero for an isotropic gradient covariance.
    pub mixed: f64,
    pub flags: Vec<NormalizationFlag>,
}

const BF_SUPPORT: f64 = 1.0;

impl FieldModel {
    pub fn power_law(exponent: f64, cutoff: f64) -> Result<Self> {
        Ok(FieldModel::PowerLaw(PowerLawSpectrum::new(exponent, cutoff)?))
    }

    pub fn atom_plus(mass: f64, base: FieldModel) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidArgument(format!("atom mass must be positive, got {mass}")));
        }
        if matches!(base, FieldModel::AtomPlus { .. }) {
            return Err(Error::InvalidArgument("nested atom models are not supported".into()));
        }
        Ok(FieldModel::AtomPlus { mass, base: Box::new(base) })
    }

    /// Canonical string id.
    pub fn id(&self) -> String {
        self.to_string()
    }

    /// The continuous part of the model (the model itself unless it carries an atom).
    pub fn base(&self) -> &FieldModel {
        match self {
            FieldModel::AtomPlus { base, .. } => base,
            other => other,
        }
    }

    /// Mass of the spectral atom at the origin.
    pub fn atom_mass(&self) -> f64 {
        match self {
            FieldModel::AtomPlus { mass, .. } => *mass,
            _ => 0.0,
        }
    }

    /// `κ(x)` in closed form.
    pub fn covariance(&self, x: [f64; 2]) -> Result<f64> {
        let r = x[0].hypot(x[1]);
        match self {
            FieldModel::BargmannFock => Ok((-0.5 * r * r).exp()),
            FieldModel::RandomPlaneWave => Ok(bessel_j0(r)),
            FieldModel::PowerLaw(_) => Err(Error::NumericCovarianceOnly(self.id())),
            FieldModel::AtomPlus { mass, base } => Ok(mass + base.covariance(x)?),
        }
    }

    /// `κ(x)`, falling back to a numeric Hankel transform where no closed form exists.
    pub fn covariance_numeric(&self, x: [f64; 2]) -> f64 {
        match self {
            FieldModel::PowerLaw(p) => p.covariance(x[0].hypot(x[1])),
            FieldModel::AtomPlus { mass, base } => mass + base.covariance_numeric(x),
            other => other.covariance(x).expect("closed-form covariance"),
        }
    }

    pub fn variance(&self) -> f64 {
        1.0 + self.atom_mass()
    }

    /// Density of the absolutely continuous spectral part at radius `s`.
    pub fn radial_density(&self, s: f64) -> Result<f64> {
        match self {
            FieldModel::BargmannFock => Ok(2.0 * PI * (-2.0 * PI * PI * s * s).exp()),
            FieldModel::RandomPlaneWave => Err(Error::SingularSpectrum(self.id())),
            FieldModel::PowerLaw(p) => Ok(p.radial(s)),
            FieldModel::AtomPlus { base, .. } => base.radial_density(s),
        }
    }

    /// `ρ(t)` of the absolutely continuous spectral part.
    pub fn spectral_density(&self, t: [f64; 2]) -> Result<f64> {
        self.radial_density(t[0].hypot(t[1]))
    }

    /// Radius of the neighbourhood of the origin on which the density is declared positive.
    pub fn support_radius(&self) -> Result<f64> {
        match self {
            FieldModel::BargmannFock => Ok(BF_SUPPORT),
            FieldModel::RandomPlaneWave => Err(Error::SingularSpectrum(self.id())),
            FieldModel::PowerLaw(p) => Ok(p.cutoff),
            FieldModel::AtomPlus { base, .. } => base.support_radius(),
        }
    }

    /// `g(r) = inf_{B(2r)} ρ`. Every density in the catalogue is radially non-increasing,
    /// so the infimum sits on the circle of radius `2r`.
    pub fn lower_density_g(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
        }
        let support = self.support_radius()?;
        if 2.0 * r > support {
            return Err(Error::OutsideSupport { radius: 2.0 * r, support });
        }
        self.radial_density(2.0 * r)
    }

    /// Derivatives of `κ` at the origin from closed forms or spectral moments.
    pub fn origin_derivatives(&self) -> OriginDerivatives {
        match self {
            FieldModel::BargmannFock => OriginDerivatives { d20: -1.0, d40: 3.0, d11: 0.0 },
            FieldModel::RandomPlaneWave => OriginDerivatives { d20: -0.5, d40: 0.375, d11: 0.0 },
            FieldModel::PowerLaw(p) => {
                OriginDerivatives { d20: -2.0 * PI * PI * p.moment(1), d40: 6.0 * PI.powi(4) * p.moment(2), d11: 0.0 }
            }
            FieldModel::AtomPlus { base, .. } => base.origin_derivatives(),
        }
    }

    /// Derivatives of `κ` at the origin by Richardson-extrapolated central differences.
    pub fn origin_derivatives_fd(&self) -> OriginDerivatives {
        let k = |x: f64, y: f64| self.covariance_numeric([x, y]);
        let base = self.origin_derivatives();
        // Step proportional to the correlation length keeps both error terms scale free.
        let step = 0.02 / (-base.d20).sqrt();
        let g = |u: f64| k(u, 0.0);
        let second = |h: f64| (g(h) - 2.0 * g(0.0) + g(-h)) / (h * h);
        let fourth = |h: f64| (g(2.0 * h) - 4.0 * g(h) + 6.0 * g(0.0) - 4.0 * g(-h) + g(-2.0 * h)) / h.powi(4);
        let mixed = |h: f64| (k(h, h) - k(h, -h) - k(-h, h) + k(-h, -h)) / (4.0 * h * h);
        let richardson = |f: &dyn Fn(f64) -> f64| (4.0 * f(step / 2.0) - f(step)) / 3.0;
        OriginDerivatives { d20: richardson(&second), d40: richardson(&fourth), d11: richardson(&mixed) }
    }

    /// `χ = -√3 ∂^(2,0)κ(0) / √(∂^(4,0)κ(0))`.
    pub fn chi(&self) -> Result<f64> {
        self.origin_derivatives().chi()
    }

    pub fn normalization_report(&self) -> NormalizationReport {
        let d = self.origin_derivatives();
        let variance = self.covariance_numeric([0.0, 0.0]);
        let gradient_variance = -d.d20;
        let mut flags = Vec::new();
        if self.atom_mass() > 0.0 {
            flags.push(NormalizationFlag::AtomNormalized);
        } else if (variance - 1.0).abs() > 1e-9 {
            flags.push(NormalizationFlag::NonUnitVariance);
        }
        if d.d11.abs() > 1e-9 * gradient_variance.abs() {
            flags.push(NormalizationFlag::Anisotropic);
        }
        NormalizationReport { variance, gradient_variance, mixed: d.d11, flags }
    }

    /// Largest grid spacing allowed for samples of this model.
    pub fn max_spacing(&self) -> f64 {
        match self.base() {
            FieldModel::RandomPlaneWave => 2.0 * PI / 16.0,
            // 16 points across the shortest wavelength 1/(2 r0).
            FieldModel::PowerLaw(p) => (1.0 / (32.0 * p.cutoff)).min(0.125),
            _ => 0.125,
        }
    }
}

impl fmt::Display for FieldModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldModel::BargmannFock => f.write_str("bargmann-fock"),
            FieldModel::RandomPlaneWave => f.write_str("rpw"),
            FieldModel::PowerLaw(p) => write!(f, "powerlaw:alpha={},r0={}", p.exponent, p.cutoff),
            FieldModel::AtomPlus { mass, base } => write!(f, "atom:mass={mass},base={base}"),
        }
    }
}

fn parse_param(part: &str, key: &str, id: &str) -> Result<f64> {
    part.strip_prefix(key)
        .and_then(|v| v.strip_prefix('='))
        .and_then(|v| v.parse::<f64>().ok())
        .ok_or_else(|| Error::UnknownModel(id.to_string()))
}

impl FromStr for FieldModel {
    type Err = Error;

    fn from_str(id: &str) -> Result<Self> {
        let id = id.trim();
        match id {
            "bargmann-fock" => return Ok(FieldModel::BargmannFock),
            "rpw" => return Ok(FieldModel::RandomPlaneWave),
            _ => {}
        }
        if let Some(rest) = id.strip_prefix("powerlaw:") {
            let (a, r) = rest.split_once(',').ok_or_else(|| Error::UnknownModel(id.to_string()))?;
            return FieldModel::power_law(parse_param(a, "alpha", id)?, parse_param(r, "r0", id)?);
        }
        if let Some(rest) = id.strip_prefix("atom:") {
            let (m, base) = rest.split_once(',').ok_or_else(|| Error::UnknownModel(id.to_string()))?;
            let base = base.strip_prefix("base=").ok_or_else(|| Error::UnknownModel(id.to_string()))?;
            return FieldModel::atom_plus(parse_param(m, "mass", id)?, base.parse()?);
        }
        Err(Error::UnknownModel(id.to_string()))
    }
}
