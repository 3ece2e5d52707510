//! Smeared two-point values for mode-separable test functions f(t) ⊗ ψ_j.
//!
//! Spatial factors are orthonormal eigenfunctions of K, so each level
//! contributes through its temporal transforms only.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::modes::{mode_constants, ModeConstants};
use crate::smearing::{TemporalTestFunction, Transforms};
use crate::spectrum::SpatialSpectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ElementKind {
    /// Sorkin–Johnston two-point function.
    Sj,
    /// Ground state restricted to the slab.
    H,
    /// Normal-ordered difference SJ - H.
    Normord,
}

impl ElementKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ElementKind::Sj => "SJ",
            ElementKind::H => "H",
            ElementKind::Normord => "NORMORD",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeMatrixElement {
    pub level_index: usize,
    pub omega: f64,
    pub multiplicity: u64,
    pub kind: ElementKind,
    pub value: Complex64,
}

fn pair(
    mc_omega: f64,
    f: &TemporalTestFunction,
    h: &TemporalTestFunction,
) -> Result<(Transforms, Transforms)> {
    Ok((f.transforms(mc_omega)?, h.transforms(mc_omega)?))
}

/// W_SJ on the mode: (‖S‖/(2ω‖C‖)) [∫f (e^{-iωt} + iδ sin ωt)] [∫h (e^{iωt'} - iδ sin ωt')].
pub fn wsj_element(
    mc: &ModeConstants,
    f: &TemporalTestFunction,
    h: &TemporalTestFunction,
) -> Result<Complex64> {
    f.check_inside(mc.tau)?;
    h.check_inside(mc.tau)?;
    let (tf, th) = pair(mc.omega, f, h)?;
    Ok(wsj_from_transforms(mc, &tf, &th))
}

pub(crate) fn wsj_from_transforms(
    mc: &ModeConstants,
    tf: &Transforms,
    th: &Transforms,
) -> Complex64 {
    let r = 1.0 - mc.delta;
    let left = Complex64::new(tf.cos, -r * tf.sin);
    let right = Complex64::new(th.cos, r * th.sin);
    left * right * mc.sj_prefactor()
}

/// W_H on the mode: (1/2ω) [∫f e^{-iωt}] [∫h e^{iωt'}].
pub fn wh_element(
    omega: f64,
    f: &TemporalTestFunction,
    h: &TemporalTestFunction,
) -> Result<Complex64> {
    crate::error::require_positive("omega", omega)?;
    let (tf, th) = pair(omega, f, h)?;
    Ok(wh_from_transforms(omega, &tf, &th))
}

pub(crate) fn wh_from_transforms(omega: f64, tf: &Transforms, th: &Transforms) -> Complex64 {
    Complex64::new(tf.cos, -tf.sin) * Complex64::new(th.cos, th.sin) / (2.0 * omega)
}

/// :W_SJ: on the mode, from the smeared normal-ordered kernel.
pub fn normord_element(
    mc: &ModeConstants,
    f: &TemporalTestFunction,
    h: &TemporalTestFunction,
) -> Result<Complex64> {
    f.check_inside(mc.tau)?;
    h.check_inside(mc.tau)?;
    let (tf, th) = pair(mc.omega, f, h)?;
    Ok(Complex64::new(normord_from_transforms(mc, &tf, &th), 0.0))
}

pub(crate) fn normord_from_transforms(mc: &ModeConstants, tf: &Transforms, th: &Transforms) -> f64 {
    let d = mc.delta;
    // cos ω(t-t') smears to CfCh + SfSh, cos ω(t+t') to CfCh - SfSh
    let cc = tf.cos * th.cos;
    let ss = tf.sin * th.sin;
    (d * d * (cc + ss) + d * (2.0 - d) * (cc - ss)) / (4.0 * mc.omega * (1.0 - d))
}

/// Diagonal elements (f, f) of the chosen kind for every level, in level order.
pub fn assemble_diagonal(
    spectrum: &SpatialSpectrum,
    tau: f64,
    f: &TemporalTestFunction,
    kind: ElementKind,
) -> Result<Vec<ModeMatrixElement>> {
    f.check_inside(tau)?;
    spectrum
        .levels
        .par_iter()
        .map(|level| {
            let mc = mode_constants(level.omega, tau)?;
            let t = f.transforms(level.omega)?;
            let value = match kind {
                ElementKind::Sj => wsj_from_transforms(&mc, &t, &t),
                ElementKind::H => wh_from_transforms(level.omega, &t, &t),
                ElementKind::Normord => Complex64::new(normord_from_transforms(&mc, &t, &t), 0.0),
            };
            Ok(ModeMatrixElement {
                level_index: level.level_index,
                omega: level.omega,
                multiplicity: level.multiplicity,
                kind,
                value,
            })
        })
        .collect()
}
