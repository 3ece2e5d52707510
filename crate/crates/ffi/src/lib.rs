//! C ABI over `sjslab`.
//!
//! Every function returns an [`SjStatus`]; on failure the message is kept in
//! thread-local storage and read back with [`sj_last_error_message`].
//! Spectra and series reports cross the boundary as opaque handles that the
//! caller releases with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, UnwindSafe};

use sjslab::diagnostics::{self, Outcome, SeriesOptions, SeriesReport, Thresholds};
use sjslab::modes::{self, ModeConstants};
use sjslab::spectrum::{self, SpatialSpectrum};
use sjslab::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SjStatus {
    Ok = 0,
    InvalidArgument = 1,
    Domain = 2,
    Validation = 3,
    Accuracy = 4,
    NearZeroOverlap = 5,
    Degenerate = 6,
    Numerical = 7,
    NullPointer = 8,
    OutOfRange = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SjOutcome {
    ConsistentWithSummable = 0,
    DivergenceIndicated = 1,
    ExactZero = 2,
}

/// Per-mode constants at slab half-width `tau`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SjModeConstants {
    pub omega: f64,
    pub tau: f64,
    pub sin_2wt: f64,
    pub sinc_2wt: f64,
    pub norm_c2: f64,
    pub norm_s2: f64,
    pub delta: f64,
    pub lambda_plus: f64,
}

impl From<&ModeConstants> for SjModeConstants {
    fn from(m: &ModeConstants) -> Self {
        SjModeConstants {
            omega: m.omega,
            tau: m.tau,
            sin_2wt: m.sin2wt,
            sinc_2wt: m.sinc2wt,
            norm_c2: m.norm_c2,
            norm_s2: m.norm_s2,
            delta: m.delta,
            lambda_plus: m.lambda_plus,
        }
    }
}

/// Opaque spatial spectrum.
pub struct SjSpectrum(SpatialSpectrum);

/// Opaque series report.
pub struct SjSeriesReport(SeriesReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SjStatus {
    match e {
        Error::InvalidParameter { .. } => SjStatus::InvalidArgument,
        Error::Domain(_) => SjStatus::Domain,
        Error::Validation(_) => SjStatus::Validation,
        Error::Accuracy { .. } => SjStatus::Accuracy,
        Error::NearZeroOverlap { .. } => SjStatus::NearZeroOverlap,
        Error::Degenerate(_) => SjStatus::Degenerate,
        Error::Numerical(_) => SjStatus::Numerical,
    }
}

enum Fail {
    Core(Error),
    Null(&'static str),
    Range(usize, usize),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Fail> + UnwindSafe>(f: F) -> SjStatus {
    match catch_unwind(f) {
        Ok(Ok(())) => SjStatus::Ok,
        Ok(Err(Fail::Core(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(name))) => {
            set_error(&format!("null pointer: {name}"));
            SjStatus::NullPointer
        }
        Ok(Err(Fail::Range(i, len))) => {
            set_error(&format!("index {i} out of range for length {len}"));
            SjStatus::OutOfRange
        }
        Err(_) => {
            set_error("internal panic");
            SjStatus::Panic
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(name))
}

unsafe fn in_ref<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(name))
}

fn constants(mc: &SjModeConstants) -> Result<ModeConstants, Fail> {
    Ok(modes::mode_constants(mc.omega, mc.tau)?)
}

/// Message of the last failure on this thread; empty if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sj_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_mode_constants(
    omega: f64,
    tau: f64,
    out: *mut SjModeConstants,
) -> SjStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = (&modes::mode_constants(omega, tau)?).into();
        Ok(())
    })
}

/// Kernel of the S-J two-point function of one mode at (t, t2).
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn sj_aj_plus_kernel(
    mc: *const SjModeConstants,
    t: f64,
    t2: f64,
    re: *mut f64,
    im: *mut f64,
) -> SjStatus {
    guard(|| {
        let mc = constants(in_ref(mc, "mc")?)?;
        let (re, im) = (out_ref(re, "re")?, out_ref(im, "im")?);
        let k = modes::aj_plus_kernel(&mc, t, t2)?;
        *re = k.re;
        *im = k.im;
        Ok(())
    })
}

/// Kernel of the ground-state two-point function e^{-iω(t-t2)}/(2ω).
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn sj_ground_state_kernel(
    omega: f64,
    t: f64,
    t2: f64,
    re: *mut f64,
    im: *mut f64,
) -> SjStatus {
    guard(|| {
        let (re, im) = (out_ref(re, "re")?, out_ref(im, "im")?);
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Fail::Core(Error::Validation(format!(
                "omega must be > 0, got {omega}"
            ))));
        }
        let k = modes::ah_kernel(omega, t, t2);
        *re = k.re;
        *im = k.im;
        Ok(())
    })
}

/// Real kernel of the normal-ordered two-point function.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn sj_normord_kernel(
    mc: *const SjModeConstants,
    t: f64,
    t2: f64,
    out: *mut f64,
) -> SjStatus {
    guard(|| {
        let mc = constants(in_ref(mc, "mc")?)?;
        *out_ref(out, "out")? = modes::normord_kernel(&mc, t, t2)?;
        Ok(())
    })
}

unsafe fn emit_spectrum(out: *mut *mut SjSpectrum, s: SpatialSpectrum) -> Result<(), Fail> {
    *out_ref(out, "out")? = Box::into_raw(Box::new(SjSpectrum(s)));
    Ok(())
}

/// Round sphere S³ of radius `radius`, levels 0..=level_max.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_spectrum_sphere(
    radius: f64,
    mass: f64,
    level_max: usize,
    out: *mut *mut SjSpectrum,
) -> SjStatus {
    guard(|| {
        let s = spectrum::build_sphere_spectrum(radius, mass, level_max)?;
        emit_spectrum(out, s)
    })
}

/// Cubic torus T³ of period `period`, shells |n|² ≤ norm2_max.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sj_spectrum_torus(
    period: f64,
    mass: f64,
    norm2_max: u64,
    out: *mut *mut SjSpectrum,
) -> SjStatus {
    guard(|| {
        let s = spectrum::build_torus_spectrum(period, mass, norm2_max)?;
        emit_spectrum(out, s)
    })
}

/// Spectrum from `len` frequencies and multiplicities.
///
/// # Safety
/// `omegas` and `multiplicities` must point to `len` readable elements.
#[no_mangle]
pub unsafe extern "C" fn sj_spectrum_custom(
    omegas: *const f64,
    multiplicities: *const u64,
    len: usize,
    mass: f64,
    out: *mut *mut SjSpectrum,
) -> SjStatus {
    guard(|| {
        if omegas.is_null() || multiplicities.is_null() {
            return Err(Fail::Null("omegas/multiplicities"));
        }
        let w = std::slice::from_raw_parts(omegas, len);
        let m = std::slice::from_raw_parts(multiplicities, len);
        let entries: Vec<(f64, u64)> = w.iter().copied().zip(m.iter().copied()).collect();
        let s = spectrum::build_custom_spectrum(&entries, mass)?;
        emit_spectrum(out, s)
    })
}

/// Number of levels; 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sj_spectrum_len(s: *const SjSpectrum) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `s` must be a live handle; outputs null or valid.
#[no_mangle]
pub unsafe extern "C" fn sj_spectrum_level(
    s: *const SjSpectrum,
    index: usize,
    omega: *mut f64,
    multiplicity: *mut u64,
) -> SjStatus {
    guard(|| {
        let s = in_ref(s, "spectrum")?;
        let (omega, multiplicity) = (
            out_ref(omega, "omega")?,
            out_ref(multiplicity, "multiplicity")?,
        );
        let level = s.0.levels.get(index).ok_or(Fail::Range(index, s.0.len()))?;
        *omega = level.omega;
        *multiplicity = level.multiplicity;
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sj_spectrum_free(s: *mut SjSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

fn options(window: usize) -> SeriesOptions {
    SeriesOptions {
        window,
        thresholds: Thresholds::default(),
    }
}

unsafe fn emit_report(out: *mut *mut SjSeriesReport, r: SeriesReport) -> Result<(), Fail> {
    *out_ref(out, "out")? = Box::into_raw(Box::new(SjSeriesReport(r)));
    Ok(())
}

/// Hilbert–Schmidt series for both branches of the normal-ordered operator.
/// A non-positive `tau_inner` selects τ/2.
///
/// # Safety
/// `s` must be a live handle; outputs null or valid.
#[no_mangle]
pub unsafe extern "C" fn sj_nec_series(
    s: *const SjSpectrum,
    tau: f64,
    tau_inner: f64,
    level_max: usize,
    window: usize,
    out_c: *mut *mut SjSeriesReport,
    out_s: *mut *mut SjSeriesReport,
) -> SjStatus {
    guard(|| {
        let s = in_ref(s, "spectrum")?;
        if out_c.is_null() || out_s.is_null() {
            return Err(Fail::Null("out_c/out_s"));
        }
        let inner = (tau_inner > 0.0).then_some(tau_inner);
        let (c, sb) = diagnostics::nec_series(&s.0, tau, inner, level_max, options(window))?;
        emit_report(out_c, c)?;
        emit_report(out_s, sb)
    })
}

/// # Safety
/// `s` must be a live handle; `out` null or valid.
#[no_mangle]
pub unsafe extern "C" fn sj_disjoint_ground_state(
    s: *const SjSpectrum,
    tau: f64,
    level_max: usize,
    window: usize,
    out: *mut *mut SjSeriesReport,
) -> SjStatus {
    guard(|| {
        let s = in_ref(s, "spectrum")?;
        let r = diagnostics::sj_hadamard_disjointness(&s.0, tau, level_max, options(window))?;
        emit_report(out, r)
    })
}

/// # Safety
/// `s` must be a live handle; `out` null or valid.
#[no_mangle]
pub unsafe extern "C" fn sj_disjoint_two_slabs(
    s: *const SjSpectrum,
    tau: f64,
    tau_prime: f64,
    level_max: usize,
    window: usize,
    out: *mut *mut SjSeriesReport,
) -> SjStatus {
    guard(|| {
        let s = in_ref(s, "spectrum")?;
        let r = diagnostics::sj_sj_disjointness(&s.0, tau, tau_prime, level_max, options(window))?;
        emit_report(out, r)
    })
}

/// Number of terms; 0 for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sj_series_len(r: *const SjSeriesReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.len())
}

/// # Safety
/// `r` must be a live handle; outputs null or valid.
#[no_mangle]
pub unsafe extern "C" fn sj_series_term(
    r: *const SjSeriesReport,
    index: usize,
    term: *mut f64,
    partial_sum: *mut f64,
) -> SjStatus {
    guard(|| {
        let r = in_ref(r, "report")?;
        let (term, partial_sum) = (out_ref(term, "term")?, out_ref(partial_sum, "partial_sum")?);
        if index >= r.0.len() {
            return Err(Fail::Range(index, r.0.len()));
        }
        *term = r.0.terms[index];
        *partial_sum = r.0.partial_sums[index];
        Ok(())
    })
}

/// P(L)/P(L/2); NaN when undefined.
///
/// # Safety
/// `r` must be a live handle; `out` null or valid.
#[no_mangle]
pub unsafe extern "C" fn sj_series_growth_ratio(
    r: *const SjSeriesReport,
    out: *mut f64,
) -> SjStatus {
    guard(|| {
        let r = in_ref(r, "report")?;
        *out_ref(out, "out")? = r.0.growth_ratio.unwrap_or(f64::NAN);
        Ok(())
    })
}

/// # Safety
/// `r` must be a live handle; `out` null or valid.
#[no_mangle]
pub unsafe extern "C" fn sj_series_tail_sup(r: *const SjSeriesReport, out: *mut f64) -> SjStatus {
    guard(|| {
        let r = in_ref(r, "report")?;
        *out_ref(out, "out")? = r.0.tail.sup;
        Ok(())
    })
}

/// # Safety
/// `r` must be a live handle; `out` null or valid.
#[no_mangle]
pub unsafe extern "C" fn sj_series_outcome(
    r: *const SjSeriesReport,
    out: *mut SjOutcome,
) -> SjStatus {
    guard(|| {
        let r = in_ref(r, "report")?;
        *out_ref(out, "out")? = match r.0.verdict.outcome {
            Outcome::ConsistentWithSummable => SjOutcome::ConsistentWithSummable,
            Outcome::DivergenceIndicated => SjOutcome::DivergenceIndicated,
            Outcome::ExactZero => SjOutcome::ExactZero,
        };
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sj_series_free(r: *mut SjSeriesReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
