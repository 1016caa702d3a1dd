use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::config::{OperatingPoint, Scenario};
use crate::steady::BranchLabel;

fn op(extra: &str) -> OperatingPoint {
    Scenario::from_str_over_reference(extra).unwrap().operating_point().unwrap()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

/// Arbitrary steady state for algebraic checks (not necessarily self-consistent).
fn synthetic(_sp: &SystemParams, c_s: Complex64, delta: f64) -> SteadyState {
    SteadyState {
        c_s,
        b1_s: Complex64::new(0.0, 0.0),
        b2_s: Complex64::new(0.0, 0.0),
        delta_eff: delta,
        photon_number: c_s.norm_sqr(),
        branch: BranchLabel::Unique,
        n_branches: 1,
    }
}

#[test]
fn h_at_zero_beat() {
    let p = op("");
    let hc = h_coeffs(&p.sp, &p.ss, 0.0);
    assert_eq!(hc.h[0].0, Complex64::new(p.sp.kappa / 2.0, p.ss.delta_eff));
}

#[test]
fn composites_recomputed() {
    let p = op("");
    let hc = h_coeffs(&p.sp, &p.ss, 1.1 * p.sp.omega_m[0]);
    let l2 = p.sp.lambda.powi(2);
    let u1p = hc.h[1].0 * hc.h[2].0 + l2;
    let u1m = hc.h[1].1 * hc.h[2].1 + l2;
    assert_eq!(hc.u1, (u1p, u1m));
    assert_eq!(hc.pi, hc.h[2].1 * u1p - hc.h[2].0 * u1m);
    let u2p = hc.h[4].0 * hc.h[5].0 + l2;
    let u2m = hc.h[4].1 * hc.h[5].1 + l2;
    assert_eq!(hc.gamma, u2p * hc.h[5].1 - u2m * hc.h[5].0);
}

#[test]
fn no_phonon_coupling_reduces_composites() {
    let p = op("lambda_hz = 0");
    let hc = h_coeffs(&p.sp, &p.ss, 0.97 * p.sp.omega_m[0]);
    assert_eq!(hc.u1.0, hc.h[1].0 * hc.h[2].0);
    // Π = h3⁺h3⁻(h2⁺ − h2⁻)
    let expect = hc.h[2].0 * hc.h[2].1 * (hc.h[1].0 - hc.h[1].1);
    assert!(rel(hc.pi, expect) < 1e-14);
}

#[test]
fn bare_cavity_lorentzian() {
    let p = op("");
    let sp = p.sp.with_g(0.0);
    let ss = synthetic(&sp, Complex64::new(0.0, 0.0), p.sp.omega_m[0]);
    let dc = p.dc.with_probe_detuning_ratio(&sp, 0.13);
    let first = solve_first_order(&sp, &ss, &dc).unwrap();
    let hc = h_coeffs(&sp, &ss, dc.xi);
    let expect = dc.eps_p * Complex64::from_polar(1.0, -dc.phi_pl()) / hc.h[0].0;
    assert!(rel(first.a_m, expect) < 1e-14);
}

/// Single-resonator response by elimination: with χ = 1/h₂⁺ − 1/h₂⁻,
/// A = ε / (h₁⁺ + |G|²χ / (1 − |G|²χ/h₁⁻)).
fn single_mr_oracle(hc: &HarmonicCoefficients, eps: Complex64) -> Complex64 {
    let g2 = hc.g_eff.norm_sqr();
    let chi = 1.0 / hc.h[1].0 - 1.0 / hc.h[1].1;
    eps / (hc.h[0].0 + g2 * chi / (1.0 - g2 * chi / hc.h[0].1))
}

#[test]
fn single_resonator_matches_independent_model() {
    let p = op("lambda_hz = 0");
    for r in [-0.3, -0.05, 0.0, 0.02, 0.25] {
        let dc = p.dc.with_probe_detuning_ratio(&p.sp, r);
        let first = solve_first_order(&p.sp, &p.ss, &dc).unwrap();
        let hc = h_coeffs(&p.sp, &p.ss, dc.xi);
        let oracle = single_mr_oracle(&hc, dc.eps_p * Complex64::from_polar(1.0, -dc.phi_pl()));
        assert!(rel(first.a_m, oracle) < 1e-10, "Δp/ωm = {r}");
    }
}

#[test]
fn residuals_and_closed_form_at_reference_point() {
    let p = op("eps1_ratio = 0.3\neps2_ratio = 0.4\nphi1_rad = 1\nphi2_rad = 2\nphi_p_rad = 0.3");
    let sol = solve(&p.sp, &p.ss, &p.dc).unwrap();
    assert!(sol.first.residual < 1e-10 && sol.second.residual < 1e-10);
    assert!(sol.first.closed_form_discrepancy.unwrap() < 1e-10);
    assert!(sol.second.closed_form_discrepancy.unwrap() < 1e-9);
}

#[test]
fn second_order_vanishes_without_sources() {
    let p = op("");
    let dc = p.dc.with_probe(0.0, 0.0);
    let first = solve_first_order(&p.sp, &p.ss, &dc).unwrap();
    let second = solve_second_order(&p.sp, &p.ss, &dc, &first).unwrap();
    assert!(second.as_array().iter().all(|v| v.norm() == 0.0));
}

#[test]
fn second_order_vanishes_without_coupling() {
    let p = op("");
    let sp = p.sp.with_g(0.0);
    let ss = synthetic(&sp, p.ss.c_s, p.ss.delta_eff);
    let first = solve_first_order(&sp, &ss, &p.dc).unwrap();
    let second = solve_second_order(&sp, &ss, &p.dc, &first).unwrap();
    assert_eq!(second.a_m.norm(), 0.0);
    assert_eq!(second.closed_form_discrepancy, None);
}

#[test]
fn zero_probe_makes_ratios_undefined() {
    let p = op("");
    let dc = p.dc.with_probe(0.0, 0.0);
    let first = solve_first_order(&p.sp, &p.ss, &dc).unwrap();
    assert!(matches!(transmission(&p.sp, &dc, &first), Err(OmitError::UndefinedRatio(_))));
    assert!(matches!(efficiency_2nd(&p.sp, &dc, &first), Err(OmitError::UndefinedRatio(_))));
}

#[test]
fn no_drives_no_second_order_efficiency() {
    let p = op("");
    let dc = p.dc.with_probe(0.0, 0.0);
    let first = solve_first_order(&p.sp, &p.ss, &dc).unwrap();
    let second = solve_second_order(&p.sp, &p.ss, &dc, &first).unwrap();
    let probe_only = p.dc;
    assert_eq!(efficiency_2nd(&p.sp, &probe_only, &second).unwrap(), 0.0);
}

#[test]
fn far_detuned_probe_sees_bare_cavity() {
    let p = op("");
    let xi = p.sp.omega_m[0] + 50.0 * p.sp.kappa;
    let t = transmission_at(&p.sp, &p.ss, &p.dc, xi).unwrap();
    let bare_ss = synthetic(&p.sp.with_g(0.0), Complex64::new(0.0, 0.0), p.ss.delta_eff);
    let bare = transmission_at(&p.sp.with_g(0.0), &bare_ss, &p.dc, xi).unwrap();
    assert!((t.norm_sqr() - bare.norm_sqr()).abs() < 1e-3);
}

#[test]
fn singular_system_names_coefficient() {
    let p = op("");
    let mut sp = p.sp.with_g(0.0);
    sp.gamma = [0.0, 0.0];
    sp.lambda = 0.0;
    let ss = synthetic(&sp, Complex64::new(0.0, 0.0), p.ss.delta_eff);
    let dc = p.dc.with_xi(sp.omega_m[0]);
    match solve_first_order(&sp, &ss, &dc) {
        Err(OmitError::Singular(msg)) => assert!(msg.contains("h2+") || msg.contains("h3+"), "{msg}"),
        other => panic!("expected singular, got {other:?}"),
    }
}

#[test]
fn turning_point_extinguishes_transmission() {
    let p = op("lambda_hz = 0");
    let tp = turning_point(&p.sp, &p.ss, p.sp.omega_m[0]).unwrap();
    assert!(tp.ratio > 0.0);
    let dc = p
        .dc
        .with_mech_drive(0, tp.ratio * p.dc.eps_p, tp.extinction_phase + p.dc.phi_p - p.dc.phi_l);
    let first = solve_first_order(&p.sp, &p.ss, &dc).unwrap();
    assert!(transmission(&p.sp, &dc, &first).unwrap().norm_sqr() < 1e-20);
    assert!(matches!(group_delay(&p.sp, &p.ss, &dc), Err(OmitError::PhaseUndefined(_))));
}

#[test]
fn turning_point_requires_single_resonator_and_coupling() {
    let p = op("");
    assert!(turning_point(&p.sp, &p.ss, p.sp.omega_m[0]).is_err());
    let q = op("lambda_hz = 0");
    let sp = q.sp.with_g(0.0);
    let ss = synthetic(&sp, Complex64::new(0.0, 0.0), q.ss.delta_eff);
    assert!(matches!(turning_point(&sp, &ss, sp.omega_m[0]), Err(OmitError::UndefinedRatio(_))));
    assert!(literal_turning_point(&q.sp, &q.ss, q.sp.omega_m[0]).is_ok());
}

#[test]
fn turning_point_is_scale_free() {
    let a = op("lambda_hz = 0\nprobe_fraction = 0.05");
    let b = op("lambda_hz = 0\nprobe_fraction = 0.01");
    let ta = turning_point(&a.sp, &a.ss, a.sp.omega_m[0]).unwrap();
    let tb = turning_point(&b.sp, &b.ss, b.sp.omega_m[0]).unwrap();
    assert_eq!(ta, tb);
}

#[test]
fn delay_vanishes_without_output_coupling() {
    let p = op("");
    let mut sp = p.sp;
    sp.eta_c = 0.0;
    let gd = group_delay(&sp, &p.ss, &p.dc).unwrap();
    assert_eq!(gd.tau, 0.0);
}

#[test]
fn single_mirror_delay_is_positive_and_matches_analytic() {
    let p = op("lambda_hz = 0\npump_power_mw = 3.5");
    let fd = group_delay(&p.sp, &p.ss, &p.dc).unwrap();
    let an = group_delay_analytic(&p.sp, &p.ss, &p.dc).unwrap();
    assert!(fd.tau > 0.0);
    assert!((fd.tau - an).abs() <= 1e-3 * an.abs());
    assert!(fd.error_estimate < 1e-3 * fd.tau.abs());
}

fn draw_params(
    base: &SystemParams,
    w: (f64, f64),
    gam: (f64, f64),
    lam: f64,
    kappa: f64,
) -> SystemParams {
    let mut sp = *base;
    let w1 = base.omega_m[0];
    sp.omega_m = [w.0 * w1, w.1 * w1];
    sp.gamma = [gam.0 * w1, gam.1 * w1];
    sp.lambda = lam * w1;
    sp.kappa = kappa * w1;
    sp
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closed_form_matches_direct_solve(
        w in (0.5f64..2.0, 0.5f64..2.0),
        gam in (1e-4f64..0.1, 1e-4f64..0.1),
        lam in 0.0f64..0.5,
        kappa in 0.05f64..1.0,
        delta in -2.0f64..2.0,
        gmag in 0.0f64..0.5,
        gphase in 0.0f64..(2.0 * PI),
        xi in 0.0f64..3.0,
        drives in (0.0f64..1.0, 0.0f64..1.0),
        phases in (0.0f64..6.3, 0.0f64..6.3, 0.0f64..6.3, 0.0f64..6.3),
    ) {
        let p = op("");
        let w1 = p.sp.omega_m[0];
        let sp = draw_params(&p.sp, w, gam, lam, kappa);
        let cs = Complex64::from_polar(gmag * w1 / sp.g, gphase);
        let ss = synthetic(&sp, cs, delta * w1);
        let mut dc = p.dc.with_xi(xi * w1);
        dc.phi_l = phases.0;
        dc.phi_p = phases.1;
        let dc = dc.with_mech_drive(0, drives.0 * dc.eps_p, phases.2).with_mech_drive(1, drives.1 * dc.eps_p, phases.3);
        if let Ok(sol) = solve(&sp, &ss, &dc) {
            prop_assert!(sol.first.closed_form_discrepancy.unwrap() < 1e-10);
            prop_assert!(sol.first.residual < 1e-10);
            prop_assert!(sol.second.residual < 1e-10);
            if let Some(d) = sol.second.closed_form_discrepancy {
                prop_assert!(d < 1e-8, "second-order closed form discrepancy {d:e}");
            }
        }
    }

    #[test]
    fn transmission_is_two_pi_periodic_in_mixing_phases(
        phi1 in 0.0f64..6.3, phi2 in 0.0f64..6.3, r in -0.4f64..0.4, e1 in 0.0f64..1.0, e2 in 0.0f64..1.0
    ) {
        let p = op("");
        let base = p.dc.with_probe_detuning_ratio(&p.sp, r);
        let t2 = |a: f64, b: f64| {
            let d = base.with_mech_drive(0, e1 * base.eps_p, a).with_mech_drive(1, e2 * base.eps_p, b);
            let f = solve_first_order(&p.sp, &p.ss, &d).unwrap();
            transmission(&p.sp, &d, &f).unwrap().norm_sqr()
        };
        let (a, b) = (t2(phi1, phi2), t2(phi1 + 2.0 * PI, phi2 + 2.0 * PI));
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
    }

    #[test]
    fn drive_homogeneity(s in 0.01f64..10.0, r in -0.4f64..0.4, e1 in 0.0f64..1.0, e2 in 0.0f64..1.0) {
        let p = op("");
        let d1 = p.dc.with_probe_detuning_ratio(&p.sp, r)
            .with_mech_drive(0, e1 * p.dc.eps_p, 0.4)
            .with_mech_drive(1, e2 * p.dc.eps_p, 1.3);
        let mut d2 = d1.with_probe(s * d1.eps_p, d1.phi_p);
        d2.eps_mech = [s * d1.eps_mech[0], s * d1.eps_mech[1]];
        let f1 = solve_first_order(&p.sp, &p.ss, &d1).unwrap();
        let f2 = solve_first_order(&p.sp, &p.ss, &d2).unwrap();
        let t1 = transmission(&p.sp, &d1, &f1).unwrap().norm_sqr();
        let t2 = transmission(&p.sp, &d2, &f2).unwrap().norm_sqr();
        prop_assert!((t1 - t2).abs() <= 1e-12 * t1.max(1.0));
        for (a, b) in f1.as_array().iter().zip(f2.as_array()) {
            prop_assert!((a * s - b).norm() <= 1e-12 * b.norm().max(1e-300));
        }
    }

    #[test]
    fn analytic_delay_matches_finite_difference(r in -0.3f64..0.3, e1 in 0.0f64..0.5, e2 in 0.0f64..0.5) {
        let p = op("");
        let dc = p.dc.with_probe_detuning_ratio(&p.sp, r)
            .with_mech_drive(0, e1 * p.dc.eps_p, 0.0)
            .with_mech_drive(1, e2 * p.dc.eps_p, PI);
        let fd = group_delay(&p.sp, &p.ss, &dc).unwrap();
        let an = group_delay_analytic(&p.sp, &p.ss, &dc).unwrap();
        prop_assert!((fd.tau - an).abs() <= 1e-3 * an.abs().max(1e-12), "fd {} analytic {}", fd.tau, an);
    }
}
