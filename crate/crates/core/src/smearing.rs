//! Real, smooth, compactly supported temporal test functions and their
//! cosine/sine transforms.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::modes::ModeConstants;
use crate::quadrature;

/// Overlaps smaller than this fraction of ∫|f| count as vanishing.
pub const NEAR_ZERO_OVERLAP: f64 = 1e-8;
/// Differences below this fraction of ∫|f| are quadrature noise.
const ABSOLUTE_FLOOR: f64 = 1e-4;
/// Maximum number of halvings tried by [`default_eta`].
pub const MAX_WIDTH_HALVINGS: u32 = 6;

/// `amplitude · exp(-a²/(a² - (t-c)²))` on |t - c| < a, zero elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum TemporalTestFunction {
    Bump {
        a: f64,
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default)]
        center: f64,
    },
}

fn one() -> f64 {
    1.0
}

/// Symmetric bump of half-width `a` centred at the origin.
pub fn bump(a: f64, amplitude: f64) -> Result<TemporalTestFunction> {
    shifted_bump(a, amplitude, 0.0)
}

pub fn shifted_bump(a: f64, amplitude: f64, center: f64) -> Result<TemporalTestFunction> {
    require_positive("a", a)?;
    if !amplitude.is_finite() || !center.is_finite() {
        return Err(Error::invalid("amplitude", "must be finite"));
    }
    Ok(TemporalTestFunction::Bump {
        a,
        amplitude,
        center,
    })
}

/// Cosine and sine transform of one function at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transforms {
    pub cos: f64,
    pub sin: f64,
}

impl TemporalTestFunction {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            TemporalTestFunction::Bump {
                a,
                amplitude,
                center,
            } => {
                let x = t - center;
                let gap = a * a - x * x;
                if gap <= 0.0 {
                    0.0
                } else {
                    amplitude * (-a * a / gap).exp()
                }
            }
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match *self {
            TemporalTestFunction::Bump { a, center, .. } => (center - a, center + a),
        }
    }

    pub fn amplitude(&self) -> f64 {
        match *self {
            TemporalTestFunction::Bump { amplitude, .. } => amplitude,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match *self {
            TemporalTestFunction::Bump { center, .. } => center == 0.0,
        }
    }

    /// Same shape with the amplitude multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> TemporalTestFunction {
        match *self {
            TemporalTestFunction::Bump {
                a,
                amplitude,
                center,
            } => TemporalTestFunction::Bump {
                a,
                amplitude: amplitude * factor,
                center,
            },
        }
    }

    /// Whether the support lies inside [-tau, tau].
    pub fn fits_in(&self, tau: f64) -> bool {
        let (lo, hi) = self.support();
        lo >= -tau && hi <= tau
    }

    pub(crate) fn check_inside(&self, tau: f64) -> Result<()> {
        if self.fits_in(tau) {
            Ok(())
        } else {
            let (lo, hi) = self.support();
            Err(Error::Domain(format!(
                "support [{lo}, {hi}] not inside (-{tau}, {tau})"
            )))
        }
    }

    /// ∫ |f|.
    pub fn l1_norm(&self) -> f64 {
        let (lo, hi) = self.support();
        let unit = self.scaled(1.0 / self.amplitude());
        // bumps are smooth and single-signed; the doubling rule settles quickly
        let v = quadrature::integrate(lo, hi, 0.0, |t| unit.eval(t)).unwrap_or_else(|e| match e {
            Error::Accuracy { last, .. } => last,
            _ => f64::NAN,
        });
        v * self.amplitude().abs()
    }

    /// ‖f‖ in L².
    pub fn l2_norm(&self) -> f64 {
        let (lo, hi) = self.support();
        let unit = self.scaled(1.0 / self.amplitude());
        let v = quadrature::integrate(lo, hi, 0.0, |t| unit.eval(t).powi(2)).unwrap_or(f64::NAN);
        v.sqrt() * self.amplitude().abs()
    }

    pub fn integral(&self) -> Result<f64> {
        let (lo, hi) = self.support();
        quadrature::integrate(lo, hi, 0.0, |t| self.eval(t))
    }

    fn transform_scale(&self) -> f64 {
        ABSOLUTE_FLOOR * self.l1_norm()
    }

    pub fn transforms(&self, omega: f64) -> Result<Transforms> {
        Ok(Transforms {
            cos: cosine_transform(self, omega)?,
            sin: sine_transform(self, omega)?,
        })
    }
}

/// ∫ f(t) cos ωt dt over the support of f.
pub fn cosine_transform(f: &TemporalTestFunction, omega: f64) -> Result<f64> {
    if !omega.is_finite() {
        return Err(Error::invalid("omega", "must be finite"));
    }
    let (lo, hi) = f.support();
    quadrature::integrate(lo, hi, f.transform_scale(), |t| {
        f.eval(t) * (omega * t).cos()
    })
}

/// ∫ f(t) sin ωt dt; exactly zero for even functions.
pub fn sine_transform(f: &TemporalTestFunction, omega: f64) -> Result<f64> {
    if !omega.is_finite() {
        return Err(Error::invalid("omega", "must be finite"));
    }
    if f.is_symmetric() {
        return Ok(0.0);
    }
    let (lo, hi) = f.support();
    quadrature::integrate(lo, hi, f.transform_scale(), |t| {
        f.eval(t) * (omega * t).sin()
    })
}

fn rescale_to(f: &TemporalTestFunction, omega: f64, target: f64) -> Result<TemporalTestFunction> {
    let overlap = cosine_transform(f, omega)?;
    if overlap.abs() < NEAR_ZERO_OVERLAP * f.l1_norm() {
        return Err(Error::NearZeroOverlap { overlap });
    }
    Ok(f.scaled(target / overlap))
}

/// Rescales f so that (1/2ω)(∫ f cos ωt)² = 1, with a positive overlap.
pub fn normalize_eta_hadamard(
    f: &TemporalTestFunction,
    omega: f64,
) -> Result<TemporalTestFunction> {
    require_positive("omega", omega)?;
    rescale_to(f, omega, (2.0 * omega).sqrt())
}

/// Rescales f so that (‖S‖/(2ω‖C‖))(∫ f cos ωt)² = 1, with a positive overlap.
pub fn normalize_eta_sj(
    f: &TemporalTestFunction,
    mc: &ModeConstants,
) -> Result<TemporalTestFunction> {
    let omega = mc.omega;
    rescale_to(f, omega, (2.0 * omega * mc.norm_c() / mc.norm_s()).sqrt())
}

/// Symmetric unit bump of width min(0.8·tau, π/(2ω)), halved while its
/// cosine overlap at ω is near zero.
pub fn default_eta(omega: f64, tau: f64) -> Result<TemporalTestFunction> {
    require_positive("omega", omega)?;
    require_positive("tau", tau)?;
    let mut a = (0.8 * tau).min(PI / (2.0 * omega));
    let mut last = 0.0;
    for _ in 0..=MAX_WIDTH_HALVINGS {
        let f = bump(a, 1.0)?;
        last = cosine_transform(&f, omega)?;
        if last.abs() >= NEAR_ZERO_OVERLAP * f.l1_norm() {
            return Ok(f);
        }
        a *= 0.5;
    }
    Err(Error::NearZeroOverlap { overlap: last })
}
