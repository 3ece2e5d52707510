use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use sjslab::diagnostics::{nec_series, sj_hadamard_disjointness, SeriesOptions};
use sjslab::modes::{aj_eigensystem, aj_plus_kernel, mode_constants};
use sjslab::quadrature::GaussLegendre;
use sjslab::smearing::{
    bump, cosine_transform, default_eta, normalize_eta_hadamard, shifted_bump, sine_transform,
};
use sjslab::spectrum::{build_custom_spectrum, build_sphere_spectrum};
use sjslab::summation::partial_sums;
use sjslab::two_point::{normord_element, wsj_element};

fn fitted_bump(tau: f64, c: f64, w: f64) -> sjslab::smearing::TemporalTestFunction {
    // c, w in [0, 1): centre within the middle half, width within the room left
    let center = (c - 0.5) * tau;
    let a = (tau - center.abs()) * (0.1 + 0.85 * w);
    shifted_bump(a, 1.0, center).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sphere_levels(radius in 0.1f64..10.0, mass in 0.01f64..10.0, level_max in 0usize..300) {
        let s = build_sphere_spectrum(radius, mass, level_max).unwrap();
        for l in &s.levels {
            let j = l.level_index as f64;
            let lhs = l.omega * l.omega - mass * mass;
            let rhs = j * (j + 2.0) / (radius * radius);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (l.omega * l.omega));
            prop_assert_eq!(l.multiplicity, (l.level_index as u64 + 1).pow(2));
        }
        let n = level_max as u64 + 1;
        prop_assert_eq!(s.total_multiplicity(), n * (n + 1) * (2 * n + 1) / 6);
    }

    #[test]
    fn norm_product(omega in 0.01f64..1e3, tau in 0.01f64..1e2) {
        let mc = mode_constants(omega, tau).unwrap();
        let x = 2.0 * omega * tau;
        let s = x.sin() / x;
        let expected = tau * tau * (1.0 - s * s);
        prop_assert!((mc.norm_c2 * mc.norm_s2 - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn positive_part_kernel_is_rank_one_psd(omega in 0.1f64..20.0, tau in 0.1f64..5.0, n in 4usize..40) {
        let mc = mode_constants(omega, tau).unwrap();
        let grid: Vec<f64> = (0..n).map(|i| -tau + 2.0 * tau * (i as f64 + 0.5) / n as f64).collect();
        let m = DMatrix::from_fn(n, n, |i, k| aj_plus_kernel(&mc, grid[i], grid[k]).unwrap());
        let eig = m.clone().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| b.total_cmp(a));
        prop_assert!(*vals.last().unwrap() >= -1e-10 * vals[0].max(1.0));
        prop_assert!(vals[1].abs() <= 1e-10 * vals[0]);
    }

    #[test]
    fn eigenvectors_orthogonal(omega in 0.1f64..50.0, tau in 0.05f64..5.0) {
        let mc = mode_constants(omega, tau).unwrap();
        let es = aj_eigensystem(&mc);
        let n = (64.0 + 4.0 * omega * tau) as usize;
        let (t, w) = GaussLegendre::new(n).mapped(-tau, tau);
        let ip: Complex64 = t
            .iter()
            .zip(&w)
            .map(|(&t, &w)| es.phi_plus(omega, t).conj() * es.phi_minus(omega, t) * w)
            .sum();
        let norm: f64 = t.iter().zip(&w).map(|(&t, &w)| es.phi_plus(omega, t).norm_sqr() * w).sum();
        prop_assert!(ip.norm() <= 1e-10 * norm);
    }

    #[test]
    fn symmetric_sine_transform_vanishes(a in 0.01f64..10.0, omega in -1e3f64..1e3) {
        prop_assert_eq!(sine_transform(&bump(a, 1.0).unwrap(), omega).unwrap(), 0.0);
    }

    #[test]
    fn transforms_are_linear(a in 0.1f64..3.0, c in -1.0f64..1.0, omega in 0.0f64..50.0, k in -20i32..20, alpha in -10.0f64..10.0) {
        let f = shifted_bump(a, 1.0, c).unwrap();
        let pow2 = 2f64.powi(k);
        let base_c = cosine_transform(&f, omega).unwrap();
        let base_s = sine_transform(&f, omega).unwrap();
        // power-of-two scalings are exact in floating point
        prop_assert_eq!(cosine_transform(&f.scaled(pow2), omega).unwrap(), pow2 * base_c);
        prop_assert_eq!(sine_transform(&f.scaled(pow2), omega).unwrap(), pow2 * base_s);
        let g = f.scaled(alpha);
        let scale = f.l1_norm() * alpha.abs();
        prop_assert!((cosine_transform(&g, omega).unwrap() - alpha * base_c).abs() <= 1e-14 * scale);
        prop_assert!((sine_transform(&g, omega).unwrap() - alpha * base_s).abs() <= 1e-14 * scale);
    }

    #[test]
    fn two_point_structure(
        omega in 0.1f64..30.0, tau in 0.1f64..4.0,
        c1 in 0.0f64..1.0, w1 in 0.0f64..1.0, c2 in 0.0f64..1.0, w2 in 0.0f64..1.0,
    ) {
        let mc = mode_constants(omega, tau).unwrap();
        let f = fitted_bump(tau, c1, w1);
        let h = fitted_bump(tau, c2, w2);
        let fh = wsj_element(&mc, &f, &h).unwrap();
        let hf = wsj_element(&mc, &h, &f).unwrap();
        let ff = wsj_element(&mc, &f, &f).unwrap();
        let scale = fh.norm().max(1e-300);
        // Hermiticity
        prop_assert!((fh - hf.conj()).norm() <= 1e-12 * scale);
        // positivity
        prop_assert!(ff.re >= -1e-14 * ff.norm() && ff.im.abs() <= 1e-12 * ff.re.abs().max(1e-300));
        // operator-norm bound
        prop_assert!(fh.norm() <= mc.lambda_plus * f.l2_norm() * h.l2_norm() * (1.0 + 1e-12));

        // commutator: Im(W(f,h) - W(h,f)) = ∫∫ f(t) sin ω(t'-t)/ω h(t'), by double quadrature
        let (tf, wf) = GaussLegendre::new(200).mapped(f.support().0, f.support().1);
        let (th, wh) = GaussLegendre::new(200).mapped(h.support().0, h.support().1);
        let mut e = 0.0;
        for (&t, &a) in tf.iter().zip(&wf) {
            let ft = a * f.eval(t);
            for (&s, &b) in th.iter().zip(&wh) {
                e += ft * b * h.eval(s) * (omega * (s - t)).sin() / omega;
            }
        }
        let lhs = (fh - hf).im;
        prop_assert!((lhs - e).abs() <= 1e-8 * (f.l1_norm() * h.l1_norm() / omega).max(e.abs()));
    }

    #[test]
    fn partial_sums_monotone(mass in 0.1f64..5.0, tau in 0.1f64..5.0) {
        let s = build_sphere_spectrum(1.0, mass, 200).unwrap();
        let (c, sb) = nec_series(&s, tau, None, 200, SeriesOptions::default()).unwrap();
        for r in [&c, &sb] {
            prop_assert!(r.partial_sums.windows(2).all(|w| w[1] >= w[0]));
        }
        let again = nec_series(&s, tau, None, 200, SeriesOptions::default()).unwrap();
        prop_assert_eq!(c.verdict, again.0.verdict);
        prop_assert_eq!(sb.verdict, again.1.verdict);
    }

    #[test]
    fn disjointness_terms_match_normal_ordered_elements(mass in 0.2f64..3.0, tau in 0.3f64..3.0) {
        let s = build_sphere_spectrum(1.0, mass, 30).unwrap();
        let r = sj_hadamard_disjointness(&s, tau, 30, SeriesOptions::default()).unwrap();
        for (i, l) in s.levels.iter().enumerate() {
            let mc = mode_constants(l.omega, tau).unwrap();
            let e = match default_eta(l.omega, tau).and_then(|f| normalize_eta_hadamard(&f, l.omega)) {
                Ok(e) => e,
                Err(_) => continue,
            };
            let v = normord_element(&mc, &e, &e).unwrap().re;
            let expected = l.multiplicity as f64 * v * v;
            prop_assert!((r.terms[i] - expected).abs() <= 1e-8 * expected.max(1e-300), "level {}: {} vs {}", i, r.terms[i], expected);
        }
    }
}

#[test]
fn compensated_sums_at_ten_thousand_levels() {
    // terms spanning many magnitudes; every term is an exact multiple of 2^-80,
    // so the reference sum is exact in u128
    let terms: Vec<f64> = (0..10_000u64)
        .map(|j| {
            let mantissa = ((j * 7919) % 1000 + 1) as f64;
            mantissa * 2f64.powi(-((j % 60) as i32))
        })
        .collect();
    let exact: u128 = terms.iter().map(|t| (t * 2f64.powi(80)) as u128).sum();
    let reference = exact as f64 * 2f64.powi(-80);
    let naive: f64 = terms.iter().sum();
    let p = partial_sums(&terms);
    assert!((p[9_999] - reference).abs() <= 1e-12 * reference);
    assert!((p[9_999] - reference).abs() <= (naive - reference).abs());
}

#[test]
fn custom_spectrum_rejects_frequencies_below_mass() {
    assert!(build_custom_spectrum(&[(0.5, 1)], 1.0).is_err());
}
