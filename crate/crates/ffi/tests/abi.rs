use std::ffi::CStr;
use std::path::Path;
use std::ptr;

use sjslab_ffi::*;

fn zeroed() -> SjModeConstants {
    SjModeConstants {
        omega: 0.0,
        tau: 0.0,
        sin_2wt: 0.0,
        sinc_2wt: 0.0,
        norm_c2: 0.0,
        norm_s2: 0.0,
        delta: 0.0,
        lambda_plus: 0.0,
    }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(sj_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn mode_constants_match_core() {
    let mut mc = zeroed();
    assert_eq!(
        unsafe { sj_mode_constants(1.0, 1.0, &mut mc) },
        SjStatus::Ok
    );
    let core = sjslab::modes::mode_constants(1.0, 1.0).unwrap();
    assert_eq!(mc.delta, core.delta);
    assert_eq!(mc.lambda_plus, core.lambda_plus);
    assert!((mc.norm_c2 - (1.0 + 2f64.sin() / 2.0)).abs() < 1e-15);
}

#[test]
fn kernels_satisfy_normal_ordering() {
    let mut mc = zeroed();
    unsafe { sj_mode_constants(2.3, 0.8, &mut mc) };
    for &(t, s) in &[(0.1, 0.2), (-0.7, 0.5), (0.79, -0.79)] {
        let (mut re, mut im, mut hre, mut him, mut n) = (0.0, 0.0, 0.0, 0.0, 0.0);
        unsafe {
            assert_eq!(sj_aj_plus_kernel(&mc, t, s, &mut re, &mut im), SjStatus::Ok);
            assert_eq!(
                sj_ground_state_kernel(2.3, t, s, &mut hre, &mut him),
                SjStatus::Ok
            );
            assert_eq!(sj_normord_kernel(&mc, t, s, &mut n), SjStatus::Ok);
        }
        assert!((re - hre - n).abs() < 1e-13);
        assert!((im - him).abs() < 1e-13);
    }
    let mut n = 0.0;
    assert_eq!(
        unsafe { sj_normord_kernel(&mc, 0.9, 0.0, &mut n) },
        SjStatus::Domain
    );
    assert!(!last_error().is_empty());
}

#[test]
fn spectrum_handles() {
    let mut s: *mut SjSpectrum = ptr::null_mut();
    assert_eq!(
        unsafe { sj_spectrum_sphere(1.0, 2.0, 10, &mut s) },
        SjStatus::Ok
    );
    assert_eq!(unsafe { sj_spectrum_len(s) }, 11);
    let (mut w, mut m) = (0.0, 0u64);
    assert_eq!(
        unsafe { sj_spectrum_level(s, 3, &mut w, &mut m) },
        SjStatus::Ok
    );
    assert_eq!(m, 16);
    assert_eq!(w, (15.0f64 + 4.0).sqrt());
    assert_eq!(
        unsafe { sj_spectrum_level(s, 11, &mut w, &mut m) },
        SjStatus::OutOfRange
    );
    unsafe { sj_spectrum_free(s) };

    let mut t: *mut SjSpectrum = ptr::null_mut();
    assert_eq!(
        unsafe { sj_spectrum_torus(1.0, 1.0, 8, &mut t) },
        SjStatus::Ok
    );
    // |n|² = 7 has no lattice points
    assert_eq!(unsafe { sj_spectrum_len(t) }, 8);
    unsafe { sj_spectrum_free(t) };

    let omegas = [3.0, 1.0, 2.0];
    let mults = [1u64, 2, 3];
    let mut c: *mut SjSpectrum = ptr::null_mut();
    assert_eq!(
        unsafe { sj_spectrum_custom(omegas.as_ptr(), mults.as_ptr(), 3, 0.5, &mut c) },
        SjStatus::Ok
    );
    unsafe { sj_spectrum_level(c, 0, &mut w, &mut m) };
    assert_eq!((w, m), (1.0, 2));
    unsafe { sj_spectrum_free(c) };

    assert_eq!(
        unsafe { sj_spectrum_custom(ptr::null(), mults.as_ptr(), 3, 0.5, &mut c) },
        SjStatus::NullPointer
    );
    assert_eq!(
        unsafe { sj_spectrum_sphere(-1.0, 2.0, 10, &mut s) },
        SjStatus::InvalidArgument
    );
}

#[test]
fn series_reports() {
    let mut s: *mut SjSpectrum = ptr::null_mut();
    unsafe { sj_spectrum_sphere(1.0, 2.0, 500, &mut s) };
    let (mut c, mut sb): (*mut SjSeriesReport, *mut SjSeriesReport) =
        (ptr::null_mut(), ptr::null_mut());
    let tau = std::f64::consts::FRAC_PI_2;
    assert_eq!(
        unsafe { sj_nec_series(s, tau, 0.0, 500, 200, &mut c, &mut sb) },
        SjStatus::Ok
    );
    assert_eq!(unsafe { sj_series_len(c) }, 501);
    let (mut g, mut o) = (0.0, SjOutcome::ExactZero);
    unsafe {
        sj_series_growth_ratio(c, &mut g);
        sj_series_outcome(c, &mut o);
    }
    assert!((1.8..=2.2).contains(&g), "{g}");
    assert_eq!(o, SjOutcome::DivergenceIndicated);
    let (mut term, mut partial) = (0.0, 0.0);
    unsafe { sj_series_term(sb, 500, &mut term, &mut partial) };
    assert!(partial > 0.0 && term > 0.0);
    unsafe {
        sj_series_free(c);
        sj_series_free(sb);
    }

    let mut d: *mut SjSeriesReport = ptr::null_mut();
    assert_eq!(
        unsafe { sj_disjoint_two_slabs(s, 1.0, 0.5, 500, 200, &mut d) },
        SjStatus::Ok
    );
    let mut sup = 0.0;
    unsafe { sj_series_tail_sup(d, &mut sup) };
    assert!(sup >= 0.05);
    unsafe { sj_series_free(d) };
    assert_eq!(
        unsafe { sj_disjoint_two_slabs(s, 1.0, 1.5, 500, 200, &mut d) },
        SjStatus::InvalidArgument
    );

    let mut e: *mut SjSeriesReport = ptr::null_mut();
    assert_eq!(
        unsafe { sj_disjoint_ground_state(s, 1.0, 500, 200, &mut e) },
        SjStatus::Ok
    );
    unsafe { sj_series_free(e) };
    unsafe { sj_spectrum_free(s) };
}

#[test]
fn header_declares_the_api() {
    let header =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/sjslab.h"))
            .unwrap();
    for name in [
        "sj_last_error_message",
        "sj_mode_constants",
        "sj_aj_plus_kernel",
        "sj_normord_kernel",
        "sj_spectrum_sphere",
        "sj_spectrum_free",
        "sj_nec_series",
        "sj_series_free",
        "typedef struct SjSpectrum SjSpectrum",
        "SJ_STATUS_NULL_POINTER",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler on PATH, skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(
        &src,
        "#include \"sjslab.h\"\nint main(void){SjModeConstants m; return sj_mode_constants(1.0,1.0,&m)==SJ_STATUS_OK?0:1;}\n",
    )
    .unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = std::process::Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-fsyntax-only")
        .arg("-I")
        .arg(include)
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| {
            std::process::Command::new(c)
                .arg("--version")
                .output()
                .is_ok()
        })
        .ok_or(())
}
