//! Closed-form per-mode quantities on L²(-τ, τ).
//!
//! For a spatial frequency ω the slab operator A = iE restricts to the rank-2
//! block A_j f = (i/ω)(⟨S, f⟩ C - ⟨C, f⟩ S) with C(t) = cos ωt, S(t) = sin ωt.
//! Everything the diagnostics need follows from ‖C‖², ‖S‖² and
//! δ = 1 - ‖C‖/‖S‖.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::spectrum::SpatialSpectrum;

const SINC_SERIES_CUTOFF: f64 = 1e-4;

/// sin(x)/x, with the Taylor series 1 - x²/6 + x⁴/120 near the origin.
pub fn stable_sinc(x: f64) -> f64 {
    if x.abs() < SINC_SERIES_CUTOFF {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// sin(πx) with exact argument reduction, so integer `x` gives exactly 0.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let mut r = x % 2.0;
    if r > 1.0 {
        r -= 2.0;
    } else if r < -1.0 {
        r += 2.0;
    }
    // r in [-1, 1]
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// sin(2ωτ), evaluated in half turns so that 2ωτ ∈ πℤ yields an exact zero.
pub fn sin_two_omega_tau(omega: f64, tau: f64) -> f64 {
    sin_pi(omega * (2.0 * tau / PI))
}

/// Per-mode constants of the block A_j on L²(-τ, τ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeConstants {
    pub omega: f64,
    pub tau: f64,
    /// sin 2ωτ
    pub sin2wt: f64,
    /// sinc 2ωτ
    pub sinc2wt: f64,
    /// ‖C‖² = τ(1 + sinc 2ωτ)
    pub norm_c2: f64,
    /// ‖S‖² = τ(1 - sinc 2ωτ)
    pub norm_s2: f64,
    /// δ = 1 - ‖C‖/‖S‖
    pub delta: f64,
    /// Positive eigenvalue ‖S‖‖C‖/ω of A_j, which is also ‖A_j‖.
    pub lambda_plus: f64,
}

pub fn mode_constants(omega: f64, tau: f64) -> Result<ModeConstants> {
    require_positive("omega", omega)?;
    require_positive("tau", tau)?;
    let x = 2.0 * omega * tau;
    let sin2wt = sin_two_omega_tau(omega, tau);
    let s = if x.abs() < SINC_SERIES_CUTOFF {
        stable_sinc(x)
    } else {
        sin2wt / x
    };
    let norm_c2 = tau * (1.0 + s);
    let norm_s2 = tau * (1.0 - s);
    // 1 - sqrt((1+s)/(1-s)), rationalized against cancellation for small s
    let delta = (-2.0 * s / (1.0 - s)) / (1.0 + ((1.0 + s) / (1.0 - s)).sqrt());
    let lambda_plus = (norm_c2 * norm_s2).sqrt() / omega;
    Ok(ModeConstants {
        omega,
        tau,
        sin2wt,
        sinc2wt: s,
        norm_c2,
        norm_s2,
        delta,
        lambda_plus,
    })
}

impl ModeConstants {
    pub fn norm_c(&self) -> f64 {
        self.norm_c2.sqrt()
    }

    pub fn norm_s(&self) -> f64 {
        self.norm_s2.sqrt()
    }

    /// ‖A_j‖ = ‖S‖‖C‖/ω.
    pub fn operator_norm(&self) -> f64 {
        self.lambda_plus
    }

    /// The uniform bound 2τ/ω.
    pub fn operator_norm_bound(&self) -> f64 {
        2.0 * self.tau / self.omega
    }

    /// Prefactor ‖S‖/(2ω‖C‖) of the positive-part kernel.
    pub fn sj_prefactor(&self) -> f64 {
        (self.norm_s2 / self.norm_c2).sqrt() / (2.0 * self.omega)
    }

    pub(crate) fn check_time(&self, t: f64) -> Result<()> {
        if t.is_finite() && t.abs() <= self.tau {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "t = {t} outside [-{0}, {0}]",
                self.tau
            )))
        }
    }
}

/// Eigen-system of A_j.
///
/// Eigenvectors are given on the (C, S) basis, φ± = C ∓ i(1-δ) S, and on the
/// exponential basis (e^{-iωt}, e^{iωt}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AjEigensystem {
    pub eigenvalue_plus: f64,
    pub eigenvalue_minus: f64,
    pub eigvec_plus: [Complex64; 2],
    pub eigvec_minus: [Complex64; 2],
    pub exp_plus: [f64; 2],
    pub exp_minus: [f64; 2],
}

pub fn aj_eigensystem(mc: &ModeConstants) -> AjEigensystem {
    let ratio = 1.0 - mc.delta;
    let half = 0.5 * mc.delta;
    AjEigensystem {
        eigenvalue_plus: mc.lambda_plus,
        eigenvalue_minus: -mc.lambda_plus,
        eigvec_plus: [Complex64::new(1.0, 0.0), Complex64::new(0.0, -ratio)],
        eigvec_minus: [Complex64::new(1.0, 0.0), Complex64::new(0.0, ratio)],
        exp_plus: [1.0 - half, half],
        exp_minus: [half, 1.0 - half],
    }
}

impl AjEigensystem {
    /// φ₊(t) for the mode frequency `omega`.
    pub fn phi_plus(&self, omega: f64, t: f64) -> Complex64 {
        let (s, c) = (omega * t).sin_cos();
        self.eigvec_plus[0] * c + self.eigvec_plus[1] * s
    }

    pub fn phi_minus(&self, omega: f64, t: f64) -> Complex64 {
        let (s, c) = (omega * t).sin_cos();
        self.eigvec_minus[0] * c + self.eigvec_minus[1] * s
    }
}

/// Mode kernel sin ω(t2 - t)/ω of the commutator function E; A_j has kernel i times this.
pub fn commutator_kernel(omega: f64, t: f64, t2: f64) -> f64 {
    (omega * (t2 - t)).sin() / omega
}

/// Kernel of the positive part A_j⁺:
/// ‖S‖/(2ω‖C‖) (e^{-iωt} + iδ sin ωt)(e^{iωt2} - iδ sin ωt2).
pub fn aj_plus_kernel(mc: &ModeConstants, t: f64, t2: f64) -> Result<Complex64> {
    mc.check_time(t)?;
    mc.check_time(t2)?;
    Ok(aj_plus_kernel_unchecked(mc, t, t2))
}

pub(crate) fn aj_plus_kernel_unchecked(mc: &ModeConstants, t: f64, t2: f64) -> Complex64 {
    let w = mc.omega;
    let d = mc.delta;
    let (s1, c1) = (w * t).sin_cos();
    let (s2, c2) = (w * t2).sin_cos();
    let left = Complex64::new(c1, -s1 + d * s1);
    let right = Complex64::new(c2, s2 - d * s2);
    left * right * mc.sj_prefactor()
}

/// Ground-state mode kernel e^{-iωt} e^{iωt2} / (2ω).
pub fn ah_kernel(omega: f64, t: f64, t2: f64) -> Complex64 {
    Complex64::from_polar(1.0 / (2.0 * omega), -omega * (t - t2))
}

/// Normal-ordered mode kernel A_j⁺ - A_j^H:
/// δ² cos ω(t-t2)/(4ω(1-δ)) + δ(2-δ) cos ω(t+t2)/(4ω(1-δ)). Always real.
pub fn normord_kernel(mc: &ModeConstants, t: f64, t2: f64) -> Result<f64> {
    mc.check_time(t)?;
    mc.check_time(t2)?;
    Ok(normord_kernel_unchecked(mc, t, t2))
}

pub(crate) fn normord_kernel_unchecked(mc: &ModeConstants, t: f64, t2: f64) -> f64 {
    let w = mc.omega;
    let d = mc.delta;
    let denom = 4.0 * w * (1.0 - d);
    (d * d * (w * (t - t2)).cos() + d * (2.0 - d) * (w * (t + t2)).cos()) / denom
}

/// The two nonzero eigenvalues of the rank-2 operator
/// T_j f = (ωδ/2)(⟨S, f⟩ S/(1-δ) - ⟨C, f⟩ C) on L²(-τ', τ').
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TjEigenvalues {
    /// -ωδ‖C‖²/2, eigenvector C
    pub negative_branch: f64,
    /// ωδ‖S‖²/(2(1-δ)), eigenvector S
    pub positive_branch: f64,
}

/// δ comes from `mc_tau`; ‖C‖, ‖S‖ are recomputed on (-tau_inner, tau_inner).
pub fn tj_eigenvalues(mc_tau: &ModeConstants, tau_inner: f64) -> Result<TjEigenvalues> {
    require_positive("tau_inner", tau_inner)?;
    if tau_inner >= mc_tau.tau {
        return Err(Error::invalid(
            "tau_inner",
            format!("must be < tau = {}, got {tau_inner}", mc_tau.tau),
        ));
    }
    let inner = mode_constants(mc_tau.omega, tau_inner)?;
    let w = mc_tau.omega;
    let d = mc_tau.delta;
    Ok(TjEigenvalues {
        negative_branch: -w * d * inner.norm_c2 / 2.0,
        positive_branch: w * d * inner.norm_s2 / (2.0 * (1.0 - d)),
    })
}

/// Mode constants for every level of a spectrum at one τ, built eagerly.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTable {
    pub tau: f64,
    pub levels: Vec<ModeRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeRow {
    pub level: usize,
    pub multiplicity: u64,
    pub constants: ModeConstants,
}

impl ModeTable {
    pub fn build(spectrum: &SpatialSpectrum, tau: f64) -> Result<ModeTable> {
        require_positive("tau", tau)?;
        let levels = spectrum
            .levels
            .par_iter()
            .map(|l| {
                mode_constants(l.omega, tau).map(|constants| ModeRow {
                    level: l.level_index,
                    multiplicity: l.multiplicity,
                    constants,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModeTable { tau, levels })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}
