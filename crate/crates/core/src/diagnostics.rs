//! Summability and disjointness diagnostics over truncated spectra.
//!
//! The underlying conditions are asymptotic ("→ 0", "square-summable"), so
//! every verdict is a finite-truncation proxy driven by recorded thresholds:
//! a growth ratio of partial sums P(L)/P(L/2) and the sup of a necessary
//! condition sequence over a trailing window of levels.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::modes::{mode_constants, sin_pi, sin_two_omega_tau, tj_eigenvalues};
use crate::spectrum::SpatialSpectrum;
use crate::summation::partial_sums;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Tail sup below which a sequence counts as tending to zero.
    pub tail: f64,
    /// Band of growth ratios read as linear divergence.
    pub growth_low: f64,
    pub growth_high: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            tail: 0.05,
            growth_low: 1.8,
            growth_high: 2.2,
        }
    }
}

pub const DEFAULT_WINDOW: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    ConsistentWithSummable,
    DivergenceIndicated,
    ExactZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub growth_ratio: Option<f64>,
    pub tail_sup: f64,
    pub thresholds: Thresholds,
}

impl Verdict {
    /// Exact zero if every term vanishes; divergence if partial sums grow at
    /// least linearly or the necessary-condition tail stays large.
    pub fn decide(
        all_zero: bool,
        growth_ratio: Option<f64>,
        tail_sup: f64,
        thresholds: Thresholds,
    ) -> Verdict {
        let outcome = if all_zero {
            Outcome::ExactZero
        } else if growth_ratio.is_some_and(|g| g >= thresholds.growth_low)
            || tail_sup >= thresholds.tail
        {
            Outcome::DivergenceIndicated
        } else {
            Outcome::ConsistentWithSummable
        };
        Verdict {
            outcome,
            growth_ratio,
            tail_sup,
            thresholds,
        }
    }

    /// Whether the growth ratio lies in the linear band.
    pub fn linear_growth(&self) -> bool {
        self.growth_ratio
            .is_some_and(|g| g >= self.thresholds.growth_low && g <= self.thresholds.growth_high)
    }
}

/// Combines verdicts on several necessary conditions.
pub fn combine(verdicts: &[Verdict]) -> Outcome {
    if verdicts
        .iter()
        .any(|v| v.outcome == Outcome::DivergenceIndicated)
    {
        Outcome::DivergenceIndicated
    } else if !verdicts.is_empty() && verdicts.iter().all(|v| v.outcome == Outcome::ExactZero) {
        Outcome::ExactZero
    } else {
        Outcome::ConsistentWithSummable
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailStatistic {
    pub window: usize,
    pub sup: f64,
    pub mean: f64,
}

impl TailStatistic {
    /// sup and mean of |x| over the last `window` entries (clamped to 1..=len).
    pub fn of(values: &[f64], window: usize) -> TailStatistic {
        if values.is_empty() {
            return TailStatistic {
                window: 0,
                sup: 0.0,
                mean: 0.0,
            };
        }
        let window = window.clamp(1, values.len());
        let tail = &values[values.len() - window..];
        let sup = tail.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mean = crate::summation::compensated_sum(tail.iter().map(|v| v.abs())) / window as f64;
        TailStatistic { window, sup, mean }
    }
}

/// Per-level terms of one series with their partial sums and verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub name: String,
    pub tau: f64,
    /// Inner interval τ' or second slab parameter, when the series uses one.
    pub tau_secondary: Option<f64>,
    pub levels: Vec<usize>,
    pub omegas: Vec<f64>,
    pub multiplicities: Vec<u64>,
    /// Multiplicity-weighted terms.
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// Name of the sequence whose decay is necessary for summability.
    pub tail_sequence_name: String,
    pub tail_sequence: Vec<f64>,
    pub tail: TailStatistic,
    pub growth_ratio: Option<f64>,
    pub verdict: Verdict,
}

impl SeriesReport {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        name: &str,
        tau: f64,
        tau_secondary: Option<f64>,
        spectrum: &SpatialSpectrum,
        terms: Vec<f64>,
        tail_sequence_name: &str,
        tail_sequence: Vec<f64>,
        window: usize,
        thresholds: Thresholds,
    ) -> SeriesReport {
        let partial = partial_sums(&terms);
        let growth_ratio = growth_ratio(&partial);
        let tail = TailStatistic::of(&tail_sequence, window);
        let all_zero = terms.iter().all(|&t| t == 0.0);
        let verdict = Verdict::decide(all_zero, growth_ratio, tail.sup, thresholds);
        SeriesReport {
            name: name.to_string(),
            tau,
            tau_secondary,
            levels: spectrum.levels.iter().map(|l| l.level_index).collect(),
            omegas: spectrum.levels.iter().map(|l| l.omega).collect(),
            multiplicities: spectrum.levels.iter().map(|l| l.multiplicity).collect(),
            terms,
            partial_sums: partial,
            tail_sequence_name: tail_sequence_name.to_string(),
            tail_sequence,
            tail,
            growth_ratio,
            verdict,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }
}

/// P(L)/P(L/2) for partial sums P(0..=L); `None` with fewer than two levels
/// or a vanishing denominator.
pub fn growth_ratio(partial: &[f64]) -> Option<f64> {
    if partial.len() < 2 {
        return None;
    }
    let last = partial.len() - 1;
    let mid = partial[last / 2];
    if mid == 0.0 {
        None
    } else {
        Some(partial[last] / mid)
    }
}

/// Options shared by the series diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesOptions {
    pub window: usize,
    pub thresholds: Thresholds,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            window: DEFAULT_WINDOW,
            thresholds: Thresholds::default(),
        }
    }
}

fn levels_up_to(spectrum: &SpatialSpectrum, level_max: usize) -> Result<SpatialSpectrum> {
    if level_max >= spectrum.len() {
        return Err(Error::invalid(
            "level_max",
            format!(
                "{level_max} exceeds spectrum extent {}",
                spectrum.len().saturating_sub(1)
            ),
        ));
    }
    Ok(spectrum.truncated(level_max + 1))
}

/// Squared-eigenvalue series of the Hilbert–Schmidt test, one per branch of
/// T_j: mult·(ωδ‖C‖²/2)² and mult·(ωδ‖S‖²/(2(1-δ)))², with δ at τ and norms
/// on (-τ', τ'). `tau_inner` defaults to τ/2.
pub fn nec_series(
    spectrum: &SpatialSpectrum,
    tau: f64,
    tau_inner: Option<f64>,
    level_max: usize,
    options: SeriesOptions,
) -> Result<(SeriesReport, SeriesReport)> {
    require_positive("tau", tau)?;
    let inner = tau_inner.unwrap_or(0.5 * tau);
    require_positive("tau_inner", inner)?;
    if inner >= tau {
        return Err(Error::invalid(
            "tau_inner",
            format!("must be < tau = {tau}, got {inner}"),
        ));
    }
    let spectrum = levels_up_to(spectrum, level_max)?;
    let rows = spectrum
        .levels
        .par_iter()
        .map(|l| {
            let mc = mode_constants(l.omega, tau)?;
            let tj = tj_eigenvalues(&mc, inner)?;
            let m = l.multiplicity as f64;
            Ok((
                m * tj.negative_branch * tj.negative_branch,
                m * tj.positive_branch * tj.positive_branch,
                mc.sin2wt,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let (terms_c, rest): (Vec<f64>, Vec<(f64, f64)>) =
        rows.into_iter().map(|(c, s, x)| (c, (s, x))).unzip();
    let (terms_s, sines): (Vec<f64>, Vec<f64>) = rest.into_iter().unzip();
    let c = SeriesReport::assemble(
        "hs_c_branch",
        tau,
        Some(inner),
        &spectrum,
        terms_c,
        "sin(2*omega*tau)",
        sines.clone(),
        options.window,
        options.thresholds,
    );
    let s = SeriesReport::assemble(
        "hs_s_branch",
        tau,
        Some(inner),
        &spectrum,
        terms_s,
        "sin(2*omega*tau)",
        sines,
        options.window,
        options.thresholds,
    );
    Ok((c, s))
}

/// sup and mean of |sin 2ωτ| over the last `window` levels.
pub fn sin_tail_analysis(spectrum: &SpatialSpectrum, tau: f64, window: usize) -> TailStatistic {
    let sines: Vec<f64> = spectrum
        .levels
        .iter()
        .map(|l| sin_two_omega_tau(l.omega, tau))
        .collect();
    TailStatistic::of(&sines, window)
}

/// The only slab half-widths at which sin 2ω_jτ can vanish on the sphere: τ = kπR/2.
pub fn sphere_candidate_taus(radius: f64, k_max: usize) -> Vec<f64> {
    (1..=k_max).map(|k| k as f64 * PI * radius / 2.0).collect()
}

/// Ratio sin²(2ω_jτ) / (((mR)²-1)πk/(2j))² at τ = kπR/2 for each j ≥ 1 in
/// `levels`; tends to 1 as j grows.
pub fn sphere_asymptotic_check(
    radius: f64,
    mass: f64,
    k: usize,
    levels: std::ops::RangeInclusive<usize>,
) -> Result<Vec<(usize, f64)>> {
    require_positive("radius", radius)?;
    require_positive("mass", mass)?;
    if k == 0 {
        return Err(Error::invalid("k", "must be >= 1"));
    }
    let mr2 = (mass * radius).powi(2);
    if (mr2 - 1.0).abs() <= 1e-12 {
        return Err(Error::Degenerate(
            "mR = 1: sin 2ω_jτ vanishes identically at τ = kπR/2 (exact-zero case)".into(),
        ));
    }
    let (lo, hi) = (*levels.start(), *levels.end());
    Ok((lo.max(1)..=hi)
        .map(|j| {
            let jf = j as f64;
            let omega = (jf * (jf + 2.0) / (radius * radius) + mass * mass).sqrt();
            // 2ωτ = kπRω
            let s = sin_pi(k as f64 * radius * omega);
            let model = (mr2 - 1.0) * PI * k as f64 / (2.0 * jf);
            (j, s * s / (model * model))
        })
        .collect())
}

/// Leading-order check that no τ makes both torus subsequences
/// sin(2ω_(r,0,0)τ) ~ sin(4πrτ/L) and sin(2ω_(r,r,0)τ) ~ sin(4√2πrτ/L) decay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusReport {
    pub period: f64,
    pub tau: f64,
    pub r_max: usize,
    /// Distance of 4τ/L to the nearest integer.
    pub axis_integer_defect: f64,
    /// Distance of 4√2τ/L to the nearest integer.
    pub diagonal_integer_defect: f64,
    pub axis_tail: TailStatistic,
    pub diagonal_tail: TailStatistic,
    /// Tails with the massive frequencies, when a mass was supplied.
    pub axis_exact_tail: Option<TailStatistic>,
    pub diagonal_exact_tail: Option<TailStatistic>,
    pub verdict: Verdict,
}

pub fn torus_incommensurability(
    period: f64,
    tau: f64,
    r_max: usize,
    window: usize,
    mass: Option<f64>,
    thresholds: Thresholds,
) -> Result<TorusReport> {
    require_positive("period", period)?;
    require_positive("tau", tau)?;
    if r_max == 0 {
        return Err(Error::invalid("r_max", "must be >= 1"));
    }
    let axis_rate = 4.0 * tau / period;
    let diag_rate = 4.0 * SQRT_2 * tau / period;
    let axis: Vec<f64> = (1..=r_max).map(|r| sin_pi(r as f64 * axis_rate)).collect();
    let diag: Vec<f64> = (1..=r_max).map(|r| sin_pi(r as f64 * diag_rate)).collect();
    let axis_tail = TailStatistic::of(&axis, window);
    let diagonal_tail = TailStatistic::of(&diag, window);

    let (axis_exact_tail, diagonal_exact_tail) = match mass {
        Some(m) => {
            require_positive("mass", m)?;
            let k0 = 2.0 * PI / period;
            let exact = |n2: f64| -> Vec<f64> {
                (1..=r_max)
                    .map(|r| {
                        let omega = (k0 * k0 * n2 * (r * r) as f64 + m * m).sqrt();
                        sin_two_omega_tau(omega, tau)
                    })
                    .collect()
            };
            (
                Some(TailStatistic::of(&exact(1.0), window)),
                Some(TailStatistic::of(&exact(2.0), window)),
            )
        }
        None => (None, None),
    };

    // both subsequences must decay; the worse one decides
    let worst = axis_tail.sup.max(diagonal_tail.sup);
    let verdict = Verdict::decide(false, None, worst, thresholds);
    Ok(TorusReport {
        period,
        tau,
        r_max,
        axis_integer_defect: (axis_rate - axis_rate.round()).abs(),
        diagonal_integer_defect: (diag_rate - diag_rate.round()).abs(),
        axis_tail,
        diagonal_tail,
        axis_exact_tail,
        diagonal_exact_tail,
        verdict,
    })
}

/// Squares of :W_SJ:(e_j, e_j) = δ_j/(1-δ_j) on a Hadamard-orthonormal system,
/// weighted by multiplicity.
pub fn sj_hadamard_disjointness(
    spectrum: &SpatialSpectrum,
    tau: f64,
    level_max: usize,
    options: SeriesOptions,
) -> Result<SeriesReport> {
    require_positive("tau", tau)?;
    let spectrum = levels_up_to(spectrum, level_max)?;
    let rows = spectrum
        .levels
        .par_iter()
        .map(|l| {
            let mc = mode_constants(l.omega, tau)?;
            let v = mc.delta / (1.0 - mc.delta);
            Ok((l.multiplicity as f64 * v * v, mc.sin2wt))
        })
        .collect::<Result<Vec<_>>>()?;
    let (terms, sines): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
    Ok(SeriesReport::assemble(
        "sj_hadamard",
        tau,
        None,
        &spectrum,
        terms,
        "sin(2*omega*tau)",
        sines,
        options.window,
        options.thresholds,
    ))
}

/// Per-level difference of the S-J states at τ and τ' < τ on an orthonormal
/// system for the τ state: ‖C‖(δ - δ')/(‖S‖(1-δ)(1-δ')), with ‖C‖, ‖S‖ and
/// δ at τ and δ' at τ'.
pub fn sj_sj_term(omega: f64, tau: f64, tau_prime: f64) -> Result<f64> {
    let mc = mode_constants(omega, tau)?;
    let mp = mode_constants(omega, tau_prime)?;
    Ok(mc.norm_c() * (mc.delta - mp.delta) / (mc.norm_s() * (1.0 - mc.delta) * (1.0 - mp.delta)))
}

pub fn sj_sj_disjointness(
    spectrum: &SpatialSpectrum,
    tau: f64,
    tau_prime: f64,
    level_max: usize,
    options: SeriesOptions,
) -> Result<SeriesReport> {
    require_positive("tau", tau)?;
    require_positive("tau_prime", tau_prime)?;
    if tau_prime >= tau {
        return Err(Error::invalid(
            "tau_prime",
            format!("must satisfy 0 < tau_prime < tau = {tau}, got {tau_prime}"),
        ));
    }
    let spectrum = levels_up_to(spectrum, level_max)?;
    let ratio = tau_prime / tau;
    let rows = spectrum
        .levels
        .par_iter()
        .map(|l| {
            let v = sj_sj_term(l.omega, tau, tau_prime)?;
            let seq =
                ratio * sin_two_omega_tau(l.omega, tau) - sin_two_omega_tau(l.omega, tau_prime);
            Ok((l.multiplicity as f64 * v * v, seq))
        })
        .collect::<Result<Vec<_>>>()?;
    let (terms, seq): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
    Ok(SeriesReport::assemble(
        "sj_sj",
        tau,
        Some(tau_prime),
        &spectrum,
        terms,
        "(tau'/tau)*sin(2*omega*tau) - sin(2*omega*tau')",
        seq,
        options.window,
        options.thresholds,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub tau: f64,
    pub tail_sup: f64,
    pub tail_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub window: usize,
    pub points: Vec<ScanPoint>,
}

impl ScanReport {
    /// Grid points whose tail sup falls below `threshold`.
    pub fn near_vanishing(&self, threshold: f64) -> Vec<f64> {
        self.points
            .iter()
            .filter(|p| p.tail_sup < threshold)
            .map(|p| p.tau)
            .collect()
    }
}

/// |sin 2ωτ| tail statistic for each τ of the grid.
pub fn tau_scan(spectrum: &SpatialSpectrum, taus: &[f64], window: usize) -> Result<ScanReport> {
    for &t in taus {
        require_positive("tau", t)?;
    }
    let points = taus
        .par_iter()
        .map(|&tau| {
            let tail = sin_tail_analysis(spectrum, tau, window);
            ScanPoint {
                tau,
                tail_sup: tail.sup,
                tail_mean: tail.mean,
            }
        })
        .collect();
    Ok(ScanReport {
        window: window.clamp(1, spectrum.len().max(1)),
        points,
    })
}

/// Evenly spaced grid lo, lo+step, … ≤ hi (with a half-step tolerance on hi).
pub fn tau_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    require_positive("tau_min", lo)?;
    require_positive("tau_step", step)?;
    if hi < lo {
        return Err(Error::invalid("tau_max", "must be >= tau_min"));
    }
    let count = ((hi - lo) / step + 0.5).floor() as usize;
    Ok((0..=count).map(|i| lo + i as f64 * step).collect())
}
