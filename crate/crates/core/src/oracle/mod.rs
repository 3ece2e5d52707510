//! Brute-force validation of the closed forms.
//!
//! Each mode kernel is discretized by a symmetrized Nyström rule on
//! Gauss–Legendre nodes, M_ik = √w_i K(t_i, t_k) √w_k, diagonalized, and
//! compared against the analytic eigen-data and kernels.

pub mod eigen;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::modes::{
    aj_eigensystem, aj_plus_kernel_unchecked, commutator_kernel, mode_constants,
    normord_kernel_unchecked, tj_eigenvalues, ModeConstants,
};
use crate::quadrature::GaussLegendre;
use crate::smearing::{cosine_transform, sine_transform, TemporalTestFunction};
use eigen::{EigenPairs, HermitianMatrix};

pub use eigen::{dense, lanczos};

/// Fewest nodes accepted by the discretizations.
pub const MIN_NODES: usize = 16;
/// Krylov dimension used for the rank-2 blocks.
const KRYLOV_STEPS: usize = 16;
const SEED: u64 = 0x5eed_0fa1;

/// A kernel discretized on Gauss–Legendre nodes in symmetrized Nyström form.
#[derive(Debug, Clone)]
pub struct DiscretizedOperator {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub matrix: HermitianMatrix,
}

impl DiscretizedOperator {
    pub fn from_kernel<K: Fn(f64, f64) -> Complex64>(
        lo: f64,
        hi: f64,
        n: usize,
        kernel: K,
    ) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::invalid(
                "nodes",
                format!("need at least {MIN_NODES}, got {n}"),
            ));
        }
        let (nodes, weights) = GaussLegendre::cached(n).mapped(lo, hi);
        let sw: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
        let matrix = HermitianMatrix::from_fn(n, |i, k| sw[i] * kernel(nodes[i], nodes[k]) * sw[k]);
        Ok(DiscretizedOperator {
            nodes,
            weights,
            matrix,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Eigenpairs: Lanczos above 256 nodes, the dense solver below.
    pub fn eigenpairs(&self) -> Result<EigenPairs> {
        if self.len() > 256 {
            lanczos(&self.matrix, KRYLOV_STEPS, SEED)
        } else {
            Ok(dense(&self.matrix))
        }
    }

    /// Discrete samples √w_i g(t_i), normalized in ℓ².
    pub fn sample_unit<G: Fn(f64) -> Complex64>(&self, g: G) -> Vec<Complex64> {
        let mut v: Vec<Complex64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w.sqrt() * g(t))
            .collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= n);
        v
    }
}

/// The block A_j = iE_j on (-τ, τ): kernel i sin(ω(t' - t))/ω.
pub fn discretized_aj(omega: f64, tau: f64, n: usize) -> Result<DiscretizedOperator> {
    require_positive("omega", omega)?;
    require_positive("tau", tau)?;
    DiscretizedOperator::from_kernel(-tau, tau, n, |t, s| {
        Complex64::new(0.0, commutator_kernel(omega, t, s))
    })
}

/// T_j on (-τ', τ'): the mixed derivative ∂²/∂t∂t' of the normal-ordered kernel,
/// (ωδ/2)(sin ωt sin ωt'/(1-δ) - cos ωt cos ωt'), with δ taken at τ.
pub fn discretized_tj(mc: &ModeConstants, tau_inner: f64, n: usize) -> Result<DiscretizedOperator> {
    require_positive("tau_inner", tau_inner)?;
    if tau_inner >= mc.tau {
        return Err(Error::invalid("tau_inner", "must be < tau"));
    }
    let (w, d) = (mc.omega, mc.delta);
    DiscretizedOperator::from_kernel(-tau_inner, tau_inner, n, |t, s| {
        let v = 0.5
            * w
            * d
            * ((w * t).sin() * (w * s).sin() / (1.0 - d) - (w * t).cos() * (w * s).cos());
        Complex64::new(v, 0.0)
    })
}

/// Outcome of diagonalizing the discretized A_j and rebuilding its positive part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositivePartCheck {
    pub omega: f64,
    pub tau: f64,
    pub nodes: usize,
    pub eigenvalue_plus: f64,
    pub eigenvalue_minus: f64,
    /// Third-largest |eigenvalue| (third singular value).
    pub third_singular: f64,
    /// |⟨top eigenvector, sampled φ₊⟩| after normalization.
    pub phi_plus_overlap: f64,
    /// max_ik |A⁺_discrete(t_i, t_k) - A⁺(t_i, t_k)|.
    pub max_deviation: f64,
    /// Gram defect of the positive eigenvectors, which bounds ‖Π² - Π‖.
    pub projector_defect: f64,
}

impl PositivePartCheck {
    pub fn eigenvalue_error(&self, mc: &ModeConstants) -> f64 {
        let exact = mc.lambda_plus;
        ((self.eigenvalue_plus - exact).abs()).max((self.eigenvalue_minus + exact).abs()) / exact
    }
}

/// Diagonalizes the discretized A_j, projects onto its positive eigenspace
/// and compares the resulting kernel with the closed-form A_j⁺ on the grid.
pub fn discretized_positive_part_check(
    omega: f64,
    tau: f64,
    n: usize,
) -> Result<PositivePartCheck> {
    let mc = mode_constants(omega, tau)?;
    let op = discretized_aj(omega, tau, n)?;
    let pairs = op.eigenpairs()?;
    let top = pairs.values.first().copied().unwrap_or(0.0);
    let bottom = pairs.values.last().copied().unwrap_or(0.0);
    if !(top > 0.0 && bottom < 0.0) {
        return Err(Error::Numerical(format!(
            "unexpected spectrum [{bottom}, {top}]"
        )));
    }
    let singular = pairs.singular_values();
    let third = singular.get(2).copied().unwrap_or(0.0);

    let cutoff = 1e-10 * top;
    let positive: Vec<(f64, &Vec<Complex64>)> = pairs
        .values
        .iter()
        .zip(&pairs.vectors)
        .filter(|(v, _)| **v > cutoff)
        .map(|(v, vec)| (*v, vec))
        .collect();

    let es = aj_eigensystem(&mc);
    let phi = op.sample_unit(|t| es.phi_plus(omega, t));
    let overlap: Complex64 = pairs.vectors[0]
        .iter()
        .zip(&phi)
        .map(|(a, b)| a.conj() * b)
        .sum();

    let sw: Vec<f64> = op.weights.iter().map(|w| w.sqrt()).collect();
    let mut max_deviation = 0.0f64;
    let mut projector_defect = 0.0f64;
    for i in 0..n {
        for k in 0..n {
            let mut p = Complex64::new(0.0, 0.0);
            for (value, v) in &positive {
                p += v[i] * v[k].conj() * *value;
            }
            let estimate = p / (sw[i] * sw[k]);
            let exact = aj_plus_kernel_unchecked(&mc, op.nodes[i], op.nodes[k]);
            max_deviation = max_deviation.max((estimate - exact).norm());
        }
    }
    for (a, (_, va)) in positive.iter().enumerate() {
        for (b, (_, vb)) in positive.iter().enumerate() {
            let g: Complex64 = va.iter().zip(vb.iter()).map(|(x, y)| x.conj() * y).sum();
            let target = if a == b { 1.0 } else { 0.0 };
            projector_defect = projector_defect.max((g - target).norm());
        }
    }

    Ok(PositivePartCheck {
        omega,
        tau,
        nodes: n,
        eigenvalue_plus: top,
        eigenvalue_minus: bottom,
        third_singular: third,
        phi_plus_overlap: overlap.norm(),
        max_deviation,
        projector_defect,
    })
}

/// Worst relative saturation defect over the trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaturationReport {
    pub trials: usize,
    pub worst_defect: f64,
}

/// Real two-point data on span{C, S}: f = a C + b S, h = c C + d S.
/// W(f, h) = (λ₊/(2‖C‖²)) (∫ f φ₊)(∫ conj(φ₊) h) with φ₊ = C - i(1-δ) S.
fn two_point_on_span(mc: &ModeConstants, f: (f64, f64), h: (f64, f64)) -> Complex64 {
    let r = 1.0 - mc.delta;
    let f_phi = Complex64::new(f.0 * mc.norm_c2, -r * f.1 * mc.norm_s2);
    let phi_h = Complex64::new(h.0 * mc.norm_c2, r * h.1 * mc.norm_s2);
    f_phi * phi_h * (mc.lambda_plus / (2.0 * mc.norm_c2))
}

/// Symplectic form σ(f, h) = ∫∫ f(t) sin(ω(t' - t))/ω h(t') on the span.
fn symplectic_on_span(mc: &ModeConstants, f: (f64, f64), h: (f64, f64)) -> f64 {
    mc.norm_c2 * mc.norm_s2 * (f.0 * h.1 - f.1 * h.0) / mc.omega
}

/// sup over unit h on the span of σ(f,h)²/(4μ(h,h)), by a dense angular scan
/// refined with golden-section search.
fn saturation_sup(mc: &ModeConstants, f: (f64, f64)) -> f64 {
    let h_at = |theta: f64| (theta.cos() / mc.norm_c(), theta.sin() / mc.norm_s());
    let ratio = |theta: f64| {
        let h = h_at(theta);
        let sigma = symplectic_on_span(mc, f, h);
        let mu_hh = two_point_on_span(mc, h, h).re;
        sigma * sigma / (4.0 * mu_hh)
    };
    let samples = 720;
    let step = std::f64::consts::PI / samples as f64;
    let best = (0..samples)
        .map(|i| i as f64 * step)
        .max_by(|a, b| ratio(*a).total_cmp(&ratio(*b)))
        .unwrap_or(0.0);
    let (mut lo, mut hi) = (best - step, best + step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (ratio(x1), ratio(x2));
    for _ in 0..200 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = ratio(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = ratio(x1);
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    ratio(best).max(f1).max(f2)
}

/// Saturation defect |sup - μ(f,f)|/μ(f,f) for one f = a C + b S.
pub fn saturation_defect(mc: &ModeConstants, a: f64, b: f64) -> f64 {
    let mu_ff = two_point_on_span(mc, (a, b), (a, b)).re;
    (saturation_sup(mc, (a, b)) - mu_ff).abs() / mu_ff
}

/// Checks μ(f,f) = sup_h σ(f,h)²/(4μ(h,h)) on span{C_j, S_j} for f = C, f = S
/// and `trials` seeded random directions.
pub fn saturation_purity_check(mc: &ModeConstants, trials: usize, seed: u64) -> SaturationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = saturation_defect(mc, 1.0, 0.0).max(saturation_defect(mc, 0.0, 1.0));
    for _ in 0..trials {
        let a = rng.random::<f64>() * 2.0 - 1.0;
        let b = rng.random::<f64>() * 2.0 - 1.0;
        worst = worst.max(saturation_defect(mc, a, b));
    }
    SaturationReport {
        trials: trials + 2,
        worst_defect: worst,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    /// Both conventions agree with the kernel (the sine term vanishes).
    Both,
    /// (δ/2ω)[Cf²/(1-δ) + Sf²].
    Plus,
    /// (δ/2ω)[Cf²/(1-δ) - Sf²], the expansion of the normal-ordered kernel.
    Minus,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub tau: f64,
    pub delta: f64,
    /// ∫∫ f(t) :W:(t, t') f(t') by brute-force double quadrature.
    pub kernel_value: f64,
    /// (δ/2ω)[Cf²/(1-δ) + Sf²]
    pub plus_convention: f64,
    /// (δ/2ω)[Cf²/(1-δ) - Sf²]
    pub minus_convention: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub omega: f64,
    pub rows: Vec<LimitRow>,
    pub matched_convention: SignConvention,
}

impl LimitReport {
    /// Whether |value| strictly decreases along the schedule.
    pub fn decreasing(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].kernel_value.abs() < w[0].kernel_value.abs())
    }
}

/// Brute-force ∫∫ f(t) K(t, t') f(t') with Gauss–Legendre rules doubled
/// from 64 to 1024 nodes per axis until successive values agree to 1e-10.
pub fn double_smear<K: Fn(f64, f64) -> f64>(f: &TemporalTestFunction, kernel: K) -> Result<f64> {
    let (lo, hi) = f.support();
    let mut n = 64;
    let mut previous = f64::NAN;
    loop {
        let (nodes, weights) = GaussLegendre::cached(n).mapped(lo, hi);
        let fw: Vec<f64> = nodes
            .iter()
            .zip(&weights)
            .map(|(&t, &w)| w * f.eval(t))
            .collect();
        let mut acc = 0.0;
        for (i, &t) in nodes.iter().enumerate() {
            let mut row = 0.0;
            for (k, &s) in nodes.iter().enumerate() {
                row += fw[k] * kernel(t, s);
            }
            acc += fw[i] * row;
        }
        if (acc - previous).abs() <= 1e-10 * acc.abs().max(1e-300) {
            return Ok(acc);
        }
        if n >= 1024 {
            return Err(Error::Accuracy {
                nodes: n,
                previous,
                last: acc,
            });
        }
        previous = acc;
        n *= 2;
    }
}

/// :W^{(τ)}:(f, f) on one mode along a schedule of τ, from the kernel and from
/// both sign conventions of the transform expression.
pub fn limit_tau_check(omega: f64, f: &TemporalTestFunction, taus: &[f64]) -> Result<LimitReport> {
    require_positive("omega", omega)?;
    let cf = cosine_transform(f, omega)?;
    let sf = sine_transform(f, omega)?;
    let mut rows = Vec::with_capacity(taus.len());
    for &tau in taus {
        let mc = mode_constants(omega, tau)?;
        f.check_inside(tau)?;
        let kernel_value = double_smear(f, |t, s| normord_kernel_unchecked(&mc, t, s))?;
        let d = mc.delta;
        let base = d / (2.0 * omega);
        rows.push(LimitRow {
            tau,
            delta: d,
            kernel_value,
            plus_convention: base * (cf * cf / (1.0 - d) + sf * sf),
            minus_convention: base * (cf * cf / (1.0 - d) - sf * sf),
        });
    }
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-8 * b.abs().max(1e-14);
    let plus = rows
        .iter()
        .all(|r| close(r.plus_convention, r.kernel_value));
    let minus = rows
        .iter()
        .all(|r| close(r.minus_convention, r.kernel_value));
    let matched_convention = match (plus, minus) {
        (true, true) => SignConvention::Both,
        (true, false) => SignConvention::Plus,
        (false, true) => SignConvention::Minus,
        (false, false) => SignConvention::Neither,
    };
    Ok(LimitReport {
        omega,
        rows,
        matched_convention,
    })
}

/// |C f(ω)| ≤ const/(ω² + m²)^power with the constant fitted on one grid and
/// checked on another.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominatedBound {
    pub power: i32,
    pub constant: f64,
    /// max over the check grid of |C f(ω)|(ω²+m²)^power / constant; ≤ 1 means the bound holds.
    pub worst_ratio: f64,
}

impl DominatedBound {
    pub fn holds(&self) -> bool {
        self.worst_ratio <= 1.0
    }
}

/// Fit grid 0.5, 1.0, …, 200 and check grid 0.1, 0.2, …, 400; both extend
/// well past the maximum of |C f(ω)|(ω² + m²)² for unit-width bumps (near ω ≈ 32).
pub fn default_bound_grids() -> (Vec<f64>, Vec<f64>) {
    let fit = (1..=400).map(|i| 0.5 * i as f64).collect();
    let check = (1..=4000).map(|i| 0.1 * i as f64).collect();
    (fit, check)
}

pub fn dominated_bound_check(
    f: &TemporalTestFunction,
    mass: f64,
    power: i32,
    fit_grid: &[f64],
    check_grid: &[f64],
    margin: f64,
) -> Result<DominatedBound> {
    require_positive("mass", mass)?;
    let weighted = |w: f64| -> Result<f64> {
        let c = cosine_transform(f, w)?
            .abs()
            .max(sine_transform(f, w)?.abs());
        Ok(c * (w * w + mass * mass).powi(power))
    };
    let mut constant = 0.0f64;
    for &w in fit_grid {
        constant = constant.max(weighted(w)?);
    }
    constant *= margin;
    let mut worst = 0.0f64;
    for &w in check_grid {
        worst = worst.max(weighted(w)? / constant);
    }
    Ok(DominatedBound {
        power,
        constant,
        worst_ratio: worst,
    })
}

/// Eigenvalues of the discretized T_j against the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TjCheck {
    pub nodes: usize,
    pub top: f64,
    pub bottom: f64,
    pub expected_top: f64,
    pub expected_bottom: f64,
}

impl TjCheck {
    /// Relative deviation of the extreme eigenvalues; absolute when T_j vanishes.
    pub fn deviation(&self) -> f64 {
        let scale = self.expected_top.abs().max(self.expected_bottom.abs());
        let err =
            ((self.top - self.expected_top).abs()).max((self.bottom - self.expected_bottom).abs());
        if scale > 0.0 {
            err / scale
        } else {
            err
        }
    }
}

pub fn tj_check(mc: &ModeConstants, tau_inner: f64, n: usize) -> Result<TjCheck> {
    let op = discretized_tj(mc, tau_inner, n)?;
    let pairs = op.eigenpairs()?;
    let closed = tj_eigenvalues(mc, tau_inner)?;
    let (hi, lo) = if closed.positive_branch >= closed.negative_branch {
        (closed.positive_branch, closed.negative_branch)
    } else {
        (closed.negative_branch, closed.positive_branch)
    };
    Ok(TjCheck {
        nodes: n,
        top: pairs.values[0],
        bottom: *pairs.values.last().unwrap_or(&0.0),
        expected_top: hi,
        expected_bottom: lo,
    })
}

/// One line of the validation suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationResult {
    pub case: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub deviation: f64,
    pub pass: bool,
}

/// The standard validation cases at `n` nodes.
pub fn run_validation_suite(n: usize) -> Result<Vec<ValidationResult>> {
    let mut out = Vec::new();
    for &(omega, tau) in &[(std::f64::consts::FRAC_PI_2, 1.0), (1.0, 1.0), (3.7, 0.6)] {
        let mc = mode_constants(omega, tau)?;
        let check = discretized_positive_part_check(omega, tau, n)?;
        let ev = check.eigenvalue_error(&mc);
        out.push(ValidationResult {
            case: format!("aj_eigenvalues(omega={omega},tau={tau})"),
            n,
            deviation: ev,
            pass: ev <= 1e-8,
        });
        let rank = check.third_singular / check.eigenvalue_plus;
        out.push(ValidationResult {
            case: format!("aj_rank2(omega={omega},tau={tau})"),
            n,
            deviation: rank,
            pass: rank <= 1e-8,
        });
        out.push(ValidationResult {
            case: format!("aj_plus_kernel(omega={omega},tau={tau})"),
            n,
            deviation: check.max_deviation,
            pass: check.max_deviation <= 1e-7,
        });
        let tj = tj_check(&mc, 0.5 * tau, n)?;
        out.push(ValidationResult {
            case: format!(
                "tj_eigenvalues(omega={omega},tau={tau},tau_inner={})",
                0.5 * tau
            ),
            n,
            deviation: tj.deviation(),
            pass: tj.deviation() <= 1e-8,
        });
        let sat = saturation_purity_check(&mc, 20, 11);
        out.push(ValidationResult {
            case: format!("saturation(omega={omega},tau={tau})"),
            n: sat.trials,
            deviation: sat.worst_defect,
            pass: sat.worst_defect <= 1e-10,
        });
    }
    Ok(out)
}
