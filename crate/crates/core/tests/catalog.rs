mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use common::{c, twin_beam_levels};
use interferometry::fock::{brute_force_overlap_auto, Amplitude, OracleConfig, Perturbation, Target};
use interferometry::overlap::*;
use interferometry::probes::{twin_beam_x, ProbeSpec};
use num_complex::Complex64;

const XS: [f64; 4] = [0.0, 0.3, 0.5, 0.7];

fn twin_dim(x: f64) -> usize {
    (twin_beam_levels(x, 1e-16) + 60).max(80)
}

#[test]
fn twin_beam_displacement_matches_reference() {
    for x in XS {
        let n = 2.0 * x * x / (1.0 - x * x);
        for (amp, arg) in [(0.1, 0.0), (0.5, 1.1), (1.0, -2.5)] {
            let alpha = Complex64::from_polar(amp, arg);
            let u = common::displacement(alpha, twin_dim(x));
            let reference = common::twin_beam_single_mode_overlap(x, &u).norm_sqr();
            let closed = twinbeam_displacement(n, amp * amp).unwrap().kappa_sq;
            assert!((closed - reference).abs() < 1e-10, "x={x} |alpha|={amp}: {closed} vs {reference}");
        }
    }
}

#[test]
fn twin_beam_squeeze_matches_reference() {
    for x in XS {
        for (r, arg) in [(0.05, 0.0), (0.2, 0.9), (0.5, 3.0)] {
            let u = common::squeeze(Complex64::from_polar(r, arg), twin_dim(x));
            let reference = common::twin_beam_single_mode_overlap(x, &u);
            let closed = twinbeam_squeeze(x, r).unwrap();
            assert!((closed.kappa_sq - reference.norm_sqr()).abs() < 1e-9, "x={x} r={r}");
        }
    }
    // x = 0.6, r = 0.2 against the crate's own oracle
    let p = Perturbation::squeeze(0.2);
    let o = brute_force_overlap_auto(&ProbeSpec::twin_beam(0.6).unwrap(), &p, &OracleConfig::default()).unwrap();
    assert!((o.kappa_sq() - twinbeam_squeeze(0.6, 0.2).unwrap().kappa_sq).abs() < 1e-7);
}

#[test]
fn twin_beam_phase_matches_reference() {
    for x in XS {
        for phi in [0.05, 0.1, 0.3, 1.0] {
            let (kappa, _) = common::twin_beam_phase(x, phi, twin_beam_levels(x, 1e-16));
            let closed = twinbeam_phase(x, phi).unwrap().kappa_sq;
            assert!((closed - kappa.norm_sqr()).abs() < 1e-10, "x={x} phi={phi}");
        }
    }
    let n = 2.0;
    let k = twinbeam_phase(twin_beam_x(n), 0.1).unwrap().kappa_sq;
    let p = Perturbation::two_mode_phase(0.1);
    let o = brute_force_overlap_auto(&ProbeSpec::TwinBeam(twin_beam_x(n)), &p, &OracleConfig::default()).unwrap();
    assert!((o.kappa_sq() - k).abs() < 1e-7);
    assert!((k - 1.0 / (1.0 + 8.0 * 0.1f64.sin().powi(2))).abs() < 1e-14);
}

#[test]
fn crate_oracle_agrees_with_reference_on_mode_b() {
    let x = 0.5;
    let alpha = Complex64::from_polar(0.7, 0.4);
    let u = common::displacement(alpha, 90);
    let reference = common::twin_beam_single_mode_overlap(x, &u);
    let p = Perturbation::displacement(alpha).on(Target::ModeB).unwrap();
    let o = brute_force_overlap_auto(&ProbeSpec::TwinBeam(x), &p, &OracleConfig::default()).unwrap();
    assert!((o.kappa - reference).norm() < 1e-9);
}

#[test]
fn squeezed_vacuum_displacement_printed_form_is_flagged() {
    let cfg = OracleConfig::default();
    // true overlap for the same setup: exp(-a^2 [2N+1 - 2 sqrt(N(N+1)) cos 2 delta])
    let truth = |n: f64, delta: f64, a2: f64| (-a2 * (2.0 * n + 1.0 - 2.0 * (n * (n + 1.0)).sqrt() * (2.0 * delta).cos())).exp();
    let mut flagged = 0;
    for n in [0.5, 1.0, 4.0] {
        for delta in [0.0, 0.4, FRAC_PI_2] {
            let f = sqvac_displacement(n, delta, 0.1, &cfg).unwrap();
            assert!((f.oracle.kappa_sq - truth(n, delta, 0.1)).abs() < 1e-8, "N={n} delta={delta}");
            flagged += usize::from(f.flagged);
            assert_eq!(f.preferred().source, Source::Oracle);
        }
    }
    assert!(flagged >= 8, "only {flagged} of 9 points flagged");
    // N = 0 reduces to the vacuum and both agree
    let f = sqvac_displacement(0.0, 0.3, 0.4, &cfg).unwrap();
    assert!(!f.flagged);
    assert!((f.oracle.kappa_sq - (-0.4f64).exp()).abs() < 1e-10);
}

#[test]
fn squeezed_vacuum_displacement_via_reference() {
    // N = 1, delta = pi/2, |alpha|^2 = 0.1, all from the reference matrices
    let d = 120;
    let zeta = Complex64::from_polar(1f64.asinh(), PI);
    let mut vac = nalgebra::DVector::from_element(d, c(0.0));
    vac[0] = c(1.0);
    let psi = common::squeeze(zeta, d) * vac;
    let out = common::displacement(c(0.1f64.sqrt()), d) * &psi;
    let reference = psi.dotc(&out).norm_sqr();
    let (probe, p) = sqvac_displacement_setup(1.0, FRAC_PI_2, 0.1);
    let o = brute_force_overlap_auto(&probe, &p, &OracleConfig::default()).unwrap();
    assert!((o.kappa_sq() - reference).abs() < 1e-9);
}

#[test]
fn squeezed_vacuum_displacement_asymptotics() {
    let big = 0.01;
    let n = 400.0;
    let a = sqvac_displacement_asymptotics(n, big);
    // invert the true overlap exactly
    let coeff = |cos2d: f64| 2.0 * n + 1.0 - 2.0 * (n * (n + 1.0)).sqrt() * cos2d;
    let exact_aligned = -(-big).ln_1p() / coeff(-1.0);
    let exact_anti = -(-big).ln_1p() / coeff(1.0);
    assert!((a.aligned / exact_aligned - 1.0).abs() < 0.01);
    assert!((a.anti_aligned / exact_anti - 1.0).abs() < 0.01);
}

#[test]
fn coherent_squeeze_printed_form_misses_a_sech_factor() {
    let cfg = OracleConfig::default();
    for (n, phi, r) in [(1.0, 0.0, 0.2), (2.0, 0.7, 0.3), (4.0, 1.3, 0.1)] {
        let f = coherent_squeeze_checked(n, phi, r, &cfg).unwrap();
        assert!(f.flagged);
        let sech = 1.0 / f64::cosh(r);
        assert!((f.printed.kappa_sq * sech - f.oracle.kappa_sq).abs() < 1e-8, "N={n} phi={phi} r={r}");
    }
    // N = 0 oracle: sech r
    let f = coherent_squeeze_checked(0.0, 0.0, 0.4, &cfg).unwrap();
    assert!((f.oracle.kappa_sq - 1.0 / 0.4f64.cosh()).abs() < 1e-10);
    // leading order 1 - N r^2
    let k = coherent_squeeze(4.0, 0.0, 0.05).unwrap().kappa_sq;
    assert!(((1.0 - k) / 0.01 - 1.0).abs() < 0.2);
}

#[test]
fn squeezed_vacuum_squeeze_matches_oracle() {
    let cfg = OracleConfig::default();
    for (zm, psi, r) in [(1.0, FRAC_PI_2, 0.1), (0.5, 0.3, 0.2), (0.8, 0.0, 0.3)] {
        let closed = sqvac_squeeze(zm, psi, r);
        let probe = ProbeSpec::squeezed_vacuum(Amplitude::from_polar(zm, psi));
        let o = brute_force_overlap_auto(&probe, &Perturbation::squeeze(r), &cfg).unwrap();
        assert!((closed.kappa - o.kappa).norm() < 1e-7, "{zm} {psi} {r}");
    }
    assert!((sqvac_squeeze(0.0, 1.0, 0.4).kappa - c(0.4f64.cosh().powf(-0.5))).norm() < 1e-15);
}

#[test]
fn squeezed_vacuum_min_r_against_root_finder() {
    let big = 0.01;
    for n in [1.0, 5.0] {
        let zm = f64::sqrt(n).asinh();
        let r = sqvac_squeeze_min_r_for_lambda(n, 0.0, big).unwrap();
        let root = common::bisect(|t| sqvac_squeeze(zm, 0.0, t).kappa_sq, 1.0 - big, 0.0, 3.0);
        assert!((r - root).abs() < 1e-6);
    }
    let r = sqvac_squeeze_min_r_for_lambda(10.0, FRAC_PI_2, big).unwrap();
    assert!((r / (0.005f64.sqrt() / 10.0) - 1.0).abs() < 1e-12);
    assert!(sqvac_squeeze_min_r_for_lambda(10.0, 1.0, 1e-12).unwrap() < 1e-6);
}

#[test]
fn phi_min_printed_form_is_flagged() {
    for n in [5.0, 20.0, 80.0] {
        let cmp = compare_phi_min(n, 0.01).unwrap();
        let x = twin_beam_x(n);
        let root = common::bisect(|p| twinbeam_phase(x, p).unwrap().kappa_sq, 0.99, 0.0, FRAC_PI_2);
        assert!((cmp.exact - root).abs() < 1e-10 * root);
        assert!((cmp.numerical - root).abs() < 1e-8 * root);
        assert!(cmp.flagged);
    }
}

#[test]
fn catalog_lookup_respects_phase_conventions() {
    let probe = ProbeSpec::squeezed_vacuum(Amplitude::from_polar(0.6, 1.0));
    let p = Perturbation::displacement(Amplitude::from_polar(0.3, 0.5));
    let (entry, r) = closed_form(&probe, &p).unwrap().unwrap();
    assert_eq!(entry, CatalogEntry::SqvacDisplacement);
    assert!(entry.is_suspect());
    // delta = (arg zeta - 2 arg alpha)/2 = 0
    let direct = sqvac_displacement_printed(0.6f64.sinh().powi(2), 0.0, 0.09).unwrap();
    assert!((r.kappa_sq - direct.kappa_sq).abs() < 1e-15);
    assert!(closed_form(&ProbeSpec::coherent(1.0), &Perturbation::displacement(0.1)).is_none());
}
