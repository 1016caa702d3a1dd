use std::path::PathBuf;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_omit-lab"));
    c.env("SOURCE_DATE_EPOCH", "1700000000");
    c
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("omit-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn digest(path: &PathBuf) -> Vec<u8> {
    Sha256::digest(std::fs::read(path).unwrap()).to_vec()
}

#[test]
fn spectrum_csv_and_sidecar() {
    let out = tmp("spec.csv");
    let o = run(&["spectrum", "--axis", "delta_p_ratio=-0.2:0.2:5", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "delta_p_ratio,t2,arg_t,re_t,im_t,status");
    assert_eq!(lines.count(), 5);
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{}.meta.json", out.display())).unwrap()).unwrap();
    assert_eq!(meta["kind"], "spectrum");
    assert_eq!(meta["timestamp"], 1700000000u64);
}

#[test]
fn json_is_byte_stable() {
    let a = tmp("a.json");
    let b = tmp("b.json");
    for p in [&a, &b] {
        let o = run(&["sideband2", "--axis", "delta_p_ratio=-0.1:0.1:7", "--set", "eps2_ratio=0.7", "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    assert_eq!(digest(&a), digest(&b));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 7);
    assert_eq!(v["metadata"]["config"].as_array().unwrap().iter().find(|kv| kv[0] == "eps2_ratio").unwrap()[1], "0.7");
}

#[test]
fn point_matches_full_scan_row() {
    let full = tmp("full.csv");
    let one = tmp("one.csv");
    let common = ["phase-map", "--config", concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/phase-map-single.conf")];
    let axes = ["--axis", "delta_p_ratio=-0.1:0.1:3", "--axis", "phi1_rad=0:2*pi:5"];
    assert!(bin().args(common).args(axes).args(["--out", full.to_str().unwrap()]).status().unwrap().success());
    assert!(bin().args(common).args(axes).args(["--point", "2,3", "--out", one.to_str().unwrap()]).status().unwrap().success());
    let full = std::fs::read_to_string(full).unwrap();
    let one = std::fs::read_to_string(one).unwrap();
    assert_eq!(one.lines().nth(1).unwrap(), full.lines().nth(1 + 2 * 5 + 3).unwrap());
}

#[test]
fn workers_flag_keeps_bytes() {
    let a = tmp("w1.csv");
    let b = tmp("w3.csv");
    for (p, w) in [(&a, "1"), (&b, "3")] {
        let o = run(&["bistability", "--axis", "pump_power_mw=0:30:31", "--set", "delta_c_ratio=1", "--workers", w, "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    assert_eq!(digest(&a), digest(&b));
}

#[test]
fn config_errors_exit_2() {
    let o = run(&["spectrum", "--set", "no_such_key=1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no_such_key"));
    let o = run(&["spectrum", "--axis", "delta_p_ratio=0:1:1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["spectrum", "--config", "/nonexistent/file.conf"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_3() {
    // zero beat frequency leaves no period to project on
    let o = run(&["oracle", "--set", "delta_p_ratio=-1"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn unwritable_output_exits_4() {
    let o = run(&["coulomb", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn stability_report_is_json() {
    let o = run(&["stability"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["stable"], true);
    assert_eq!(v["rh"].as_array().unwrap().len(), 6);
}

#[test]
fn config_prints_resolved_values() {
    let o = run(&["config", "--set", "pump_power_mw=3.5"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("pump_power_mw = 3.5"));
}
