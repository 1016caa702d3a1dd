mod common;

use std::f64::consts::PI;

use omit_core::scan::{parse_csv, run_scan, Axis, ScanKind, ScanSpec, Status};

fn same_or_both_nan(a: f64, b: f64) -> bool {
    a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan())
}

#[test]
fn csv_round_trips_every_cell() {
    for (_, spec) in common::golden_scans() {
        let r = run_scan(&spec).unwrap();
        let bytes = common::csv_bytes(&spec);
        let (cols, rows, status) = parse_csv(std::str::from_utf8(&bytes).unwrap()).unwrap();
        assert_eq!(cols, r.columns);
        assert_eq!(status, r.status);
        for (a, b) in rows.iter().flatten().zip(r.rows.iter().flatten()) {
            assert!(same_or_both_nan(*a, *b), "{a} vs {b}");
        }
    }
}

#[test]
fn golden_checksums_match() {
    for (name, spec) in common::golden_scans() {
        let got = common::sha256_hex(&common::csv_bytes(&spec));
        assert_eq!(Some(got), common::stored_checksum(name), "{name}");
    }
}

#[test]
fn coupled_spectrum_has_two_peaks_around_a_dip() {
    let r = run_scan(&ScanSpec::new(ScanKind::Spectrum, common::scenario(None))).unwrap();
    let x = r.column("delta_p_ratio").unwrap();
    let t2 = r.column("t2").unwrap();
    assert!(r.status.iter().all(|s| *s == Status::Ok));
    let centre = x.iter().position(|v| v.abs() < 1e-12).unwrap();
    let peak = |range: std::ops::Range<usize>| range.map(|i| t2[i]).fold(f64::NEG_INFINITY, f64::max);
    let left = peak(0..centre);
    let right = peak(centre + 1..x.len());
    assert!(t2[centre] < 0.1 * left.min(right), "dip {} peaks {left} {right}", t2[centre]);
    // interior local maxima on each side
    let is_max = |i: usize| t2[i] > t2[i - 1] && t2[i] > t2[i + 1];
    assert!((1..centre).any(is_max));
    assert!((centre + 1..x.len() - 1).any(is_max));
}

#[test]
fn drive_phase_switches_absorption_to_amplification() {
    let spec = ScanSpec::new(ScanKind::PhaseMap, common::scenario(Some("phase-map-single.conf")));
    let r = run_scan(&spec).unwrap();
    let x = r.column("delta_p_ratio").unwrap();
    let phi = r.column("phi1_rad").unwrap();
    let t2 = r.column("t2").unwrap();
    let at = |target: f64| {
        let i = (0..x.len()).find(|&i| x[i].abs() < 1e-12 && (phi[i] - target).abs() < 1e-9).unwrap();
        t2[i]
    };
    assert!(at(0.0) < 0.02, "Phi1 = 0: {}", at(0.0));
    assert!(at(PI) > 1.0, "Phi1 = pi: {}", at(PI));
}

#[test]
fn scans_are_deterministic_across_worker_counts() {
    let base = common::scenario(Some("sideband-mr2.conf"));
    let axes = vec![Axis::parse("delta_p_ratio=-0.3:0.3:121").unwrap()];
    let run = |w| {
        let spec = ScanSpec { workers: Some(w), ..ScanSpec::new(ScanKind::Sideband2, base.clone()).with_axes(axes.clone()) };
        common::csv_bytes(&spec)
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(4));
}

#[test]
fn bistability_scan_flags_fold_region() {
    let r = run_scan(&ScanSpec::new(ScanKind::Bistability, common::scenario(Some("bistability.conf")))).unwrap();
    let n = r.column("n_branches").unwrap();
    let x_mid = r.column("x_middle").unwrap();
    assert!(n.contains(&3.0));
    for (k, m) in n.iter().zip(&x_mid) {
        assert_eq!(*k == 3.0, m.is_finite());
    }
}
