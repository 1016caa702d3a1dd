#![allow(dead_code)]

use std::path::PathBuf;

use omit_core::scan::{run_scan, write_csv, ScanKind, ScanSpec};
use omit_core::Scenario;
use sha2::{Digest, Sha256};

pub fn repo_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

pub fn scenario(config: Option<&str>) -> Scenario {
    match config {
        Some(name) => Scenario::from_file(&repo_path(&format!("configs/{name}"))).unwrap(),
        None => Scenario::reference(),
    }
}

/// The reproduction scans whose CSV checksums are pinned, with their default axes.
pub fn golden_scans() -> Vec<(&'static str, ScanSpec)> {
    vec![
        ("double-omit-spectrum", ScanSpec::new(ScanKind::Spectrum, scenario(None))),
        ("phase-map-single", ScanSpec::new(ScanKind::PhaseMap, scenario(Some("phase-map-single.conf")))),
        ("sideband-mr2", ScanSpec::new(ScanKind::Sideband2, scenario(Some("sideband-mr2.conf")))),
        ("bistability", ScanSpec::new(ScanKind::Bistability, scenario(Some("bistability.conf")))),
    ]
}

pub fn csv_bytes(spec: &ScanSpec) -> Vec<u8> {
    let r = run_scan(spec).unwrap();
    let mut buf = Vec::new();
    write_csv(&r, &mut buf).unwrap();
    buf
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.sha256"))
}

/// Stored checksum, if present.
pub fn stored_checksum(name: &str) -> Option<String> {
    std::fs::read_to_string(golden_path(name)).ok().map(|s| s.trim().to_string())
}
