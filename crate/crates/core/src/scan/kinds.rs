//! Per-point evaluation for every scan kind.

use super::{ScanKind, Status};
use crate::config::Scenario;
use crate::error::{OmitError, Result};
use crate::sideband::{efficiency_2nd, group_delay, solve_first_order, solve_second_order, transmission};
use crate::stability::analyze;
use crate::steady::{cubic_coeffs, photon_number_branches, steady_from_photon_number, BranchLabel};

/// Map a per-point failure to a row flag; configuration errors abort the scan.
fn flag(e: OmitError) -> Result<Status> {
    match e {
        OmitError::BranchNotAvailable { .. } => Ok(Status::NoBranch),
        OmitError::Singular(_) => Ok(Status::Singular),
        e if e.is_usage() => Err(e),
        OmitError::Io(_) => Err(e),
        _ => Ok(Status::Nonfinite),
    }
}

fn finite_or_flag(values: Vec<f64>, status: Status) -> (Vec<f64>, Status) {
    if status == Status::Ok && values.iter().any(|v| !v.is_finite()) {
        (values, Status::Nonfinite)
    } else {
        (values, status)
    }
}

fn bool_f(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Computed columns and status of one point.
pub fn evaluate_point(kind: ScanKind, s: &Scenario) -> Result<(Vec<f64>, Status)> {
    let width = kind.output_columns().len();
    match compute(kind, s) {
        // missing branches are NaN by design in these two kinds
        Ok((v, st)) if matches!(kind, ScanKind::Bistability | ScanKind::StabilityMap) => Ok((v, st)),
        Ok((v, st)) => Ok(finite_or_flag(v, st)),
        Err(e) => Ok((vec![f64::NAN; width], flag(e)?)),
    }
}

fn compute(kind: ScanKind, s: &Scenario) -> Result<(Vec<f64>, Status)> {
    match kind {
        ScanKind::Bistability => return bistability(s),
        ScanKind::StabilityMap => return stability_map(s),
        ScanKind::Coulomb => {
            let sp = s.system_params()?;
            let lam = s.coulomb_lambda()?;
            return Ok((vec![lam, lam / sp.omega_m[0]], Status::Ok));
        }
        _ => {}
    }
    let op = s.operating_point()?;
    let (sp, dc, ss) = (op.sp, op.dc, op.ss);
    let status = if analyze(&sp, &ss)?.stable { Status::Ok } else { Status::UnstableBranch };
    let first = solve_first_order(&sp, &ss, &dc)?;
    let t = transmission(&sp, &dc, &first)?;
    let values = match kind {
        ScanKind::Spectrum | ScanKind::Amplitude => vec![t.norm_sqr(), t.arg(), t.re, t.im],
        ScanKind::PhaseMap => vec![dc.mixing_phase(0), t.norm_sqr(), t.arg()],
        ScanKind::DelayVsPower => {
            let gd = group_delay(&sp, &ss, &dc)?;
            vec![dc.delta_c, gd.tau, gd.error_estimate, t.norm_sqr()]
        }
        ScanKind::Sideband2 => {
            let second = solve_second_order(&sp, &ss, &dc, &first)?;
            vec![efficiency_2nd(&sp, &dc, &second)?, t.norm_sqr()]
        }
        ScanKind::Bistability | ScanKind::StabilityMap | ScanKind::Coulomb => unreachable!(),
    };
    Ok((values, status))
}

fn bistability(s: &Scenario) -> Result<(Vec<f64>, Status)> {
    let sp = s.system_params()?;
    let dc = s.drive(&sp)?;
    let br = photon_number_branches(&cubic_coeffs(&sp, &dc))?;
    let r = &br.roots;
    // x_middle and x_upper are NaN where the branch does not exist (see n_branches)
    let (lo, mid, up) = match r.len() {
        1 => (r[0], f64::NAN, f64::NAN),
        2 => (r[0], f64::NAN, r[1]),
        _ => (r[0], r[1], r[2]),
    };
    let values = vec![dc.delta_c, lo, mid, up, r.len() as f64, bool_f(br.fold)];
    Ok((values, Status::Ok))
}

fn stability_map(s: &Scenario) -> Result<(Vec<f64>, Status)> {
    let sp = s.system_params()?;
    let dc = s.drive(&sp)?;
    let br = photon_number_branches(&cubic_coeffs(&sp, &dc))?;
    let r = &br.roots;
    let slots: [Option<f64>; 3] = match r.len() {
        1 => [Some(r[0]), None, None],
        2 => [Some(r[0]), None, Some(r[1])],
        _ => [Some(r[0]), Some(r[1]), Some(r[2])],
    };
    let mut values = vec![dc.delta_c, r.len() as f64];
    for x in slots {
        match x {
            Some(x) => {
                let ss = steady_from_photon_number(&sp, &dc, x, BranchLabel::Unique, r.len());
                let rep = analyze(&sp, &ss)?;
                values.push(bool_f(rep.stable));
                values.push(rep.max_real_eigenvalue);
            }
            None => values.extend([f64::NAN, f64::NAN]),
        }
    }
    Ok((values, Status::Ok))
}
