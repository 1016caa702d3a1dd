//! Transmission, second-order efficiency, turning point and group delay.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::{a1m_closed_dual, h_coeffs, solve_first_order, SidebandBlock};
use crate::error::{OmitError, Result};
use crate::params::{DriveConfig, SystemParams};
use crate::steady::SteadyState;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// |t| below which the transmission phase is treated as undefined.
pub const PHASE_FLOOR: f64 = 1e-12;

fn probe_reference(dc: &DriveConfig) -> Result<Complex64> {
    if dc.eps_p == 0.0 {
        return Err(OmitError::UndefinedRatio("probe amplitude eps_p is zero"));
    }
    Ok(dc.eps_p * Complex64::from_polar(1.0, -dc.phi_pl()))
}

/// Complex transmission t = 1 − η_c κ A₁⁻ / (ε_p e^{−iφ_pl}).
pub fn transmission(sp: &SystemParams, dc: &DriveConfig, first: &SidebandBlock) -> Result<Complex64> {
    Ok(1.0 - sp.eta_c * sp.kappa * first.a_m / probe_reference(dc)?)
}

/// Transmission at beat frequency `xi` (direct solve).
pub fn transmission_at(sp: &SystemParams, ss: &SteadyState, dc: &DriveConfig, xi: f64) -> Result<Complex64> {
    let d = dc.with_xi(xi);
    transmission(sp, &d, &solve_first_order(sp, ss, &d)?)
}

/// η = |η_c κ A₂⁻ / (ε_p e^{−iφ_pl})| as a fraction (not percent).
pub fn efficiency_2nd(sp: &SystemParams, dc: &DriveConfig, second: &SidebandBlock) -> Result<f64> {
    Ok((sp.eta_c * sp.kappa * second.a_m / probe_reference(dc)?).norm())
}

/// Drive ratio at which the on-resonance transmission of a single-resonator
/// device vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TurningPoint {
    /// |ε₁/ε_p|.
    pub ratio: f64,
    /// Complex solution z = (ε₁/ε_p) e^{−iΦ₁} of t = 0.
    #[serde(serialize_with = "crate::steady::ser_c")]
    pub z: Complex64,
    /// Mixing phase Φ₁ = −arg z at which the extinction is exact, in [0, 2π).
    pub extinction_phase: f64,
}

fn single_mr_check(sp: &SystemParams) -> Result<()> {
    if sp.lambda != 0.0 {
        return Err(OmitError::param("lambda", "turning point is defined for the single-resonator device (lambda = 0)"));
    }
    Ok(())
}

/// Solve t = 0 for the MR₁ drive at beat frequency `xi`, with λ = 0 and ε₂ = 0.
///
/// With λ = 0 the first-order amplitude reduces to
/// A₁⁻ e^{iφ_pl} = [(h₁⁻h₂⁺h₂⁻ + 2iω₁|G|²)ε_p + iG h₁⁻h₂⁻ ε₁e^{−iΦ₁}] / (h₁⁺h₁⁻h₂⁺h₂⁻ − 4Δω₁|G|²),
/// and setting η_c κ A₁⁻ e^{iφ_pl} = ε_p gives z linearly.
pub fn turning_point(sp: &SystemParams, ss: &SteadyState, xi: f64) -> Result<TurningPoint> {
    single_mr_check(sp)?;
    let hc = h_coeffs(sp, ss, xi);
    let g = hc.g_eff;
    let ((h1p, h1m), (h2p, h2m)) = (hc.h[0], hc.h[1]);
    let w1 = sp.omega_m[0];
    let ek = sp.eta_c * sp.kappa;
    let den = I * ek * g * h1m * h2m;
    if den.norm() == 0.0 {
        return Err(OmitError::UndefinedRatio("turning point needs G != 0"));
    }
    let num = h1p * h1m * h2p * h2m - 4.0 * hc.delta * w1 * g.norm_sqr() - ek * (h1m * h2p * h2m + 2.0 * I * w1 * g.norm_sqr());
    let z = num / den;
    Ok(TurningPoint { ratio: z.norm(), z, extinction_phase: (-z.arg()).rem_euclid(TAU) })
}

/// The closed-form turning-point expression with its α factor, evaluated as
/// written for comparison. It is not dimensionally homogeneous and
/// is not used by any other routine.
pub fn literal_turning_point(sp: &SystemParams, ss: &SteadyState, xi: f64) -> Result<Complex64> {
    single_mr_check(sp)?;
    let hc = h_coeffs(sp, ss, xi);
    let g = hc.g_eff;
    let ((h1p, h1m), (h2p, h2m)) = (hc.h[0], hc.h[1]);
    let (w1, k, g1, eta) = (sp.omega_m[0], sp.kappa, sp.gamma[0], sp.eta_c);
    let d = hc.delta;
    let prod = h1p * h1m * h2p * h2m;
    let alpha = 2.0 * prod + g.norm_sqr() * k * g1 - 4.0 * d * w1 * g.norm_sqr();
    let den = 2.0 * g * prod * eta * k;
    if den.norm() == 0.0 {
        return Err(OmitError::UndefinedRatio("turning point needs G != 0"));
    }
    Ok((w1 * k + d * g1 - w1 * eta * k * alpha) / den)
}

/// Group delay with its estimated truncation error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupDelay {
    /// τ_g, s. Positive is delay (slow light).
    pub tau: f64,
    pub error_estimate: f64,
}

/// Relative step of the finite difference, in units of κ.
pub const DELAY_STEP: f64 = 1e-4;

/// τ_g = d arg t / dω_p at ξ = `dc.xi` by central differences with one level
/// of Richardson extrapolation; the phase is unwrapped through arg(t₊/t₋).
pub fn group_delay(sp: &SystemParams, ss: &SteadyState, dc: &DriveConfig) -> Result<GroupDelay> {
    let t0 = transmission_at(sp, ss, dc, dc.xi)?;
    if t0.norm() < PHASE_FLOOR {
        return Err(OmitError::PhaseUndefined(t0.norm()));
    }
    let central = |h: f64| -> Result<f64> {
        let tp = transmission_at(sp, ss, dc, dc.xi + h)?;
        let tm = transmission_at(sp, ss, dc, dc.xi - h)?;
        Ok((tp / tm).arg() / (2.0 * h))
    };
    let h = DELAY_STEP * sp.kappa;
    let coarse = central(h)?;
    let fine = central(h / 2.0)?;
    let tau = (4.0 * fine - coarse) / 3.0;
    Ok(GroupDelay { tau, error_estimate: (tau - fine).abs() })
}

/// τ_g from forward-mode differentiation of the closed form: Im(t'/t).
pub fn group_delay_analytic(sp: &SystemParams, ss: &SteadyState, dc: &DriveConfig) -> Result<f64> {
    let hc = h_coeffs(sp, ss, dc.xi);
    let a = a1m_closed_dual(&hc, dc);
    let r = probe_reference(dc)?;
    let t = 1.0 - sp.eta_c * sp.kappa * a.v / r;
    if t.norm() < PHASE_FLOOR {
        return Err(OmitError::PhaseUndefined(t.norm()));
    }
    let dt = -sp.eta_c * sp.kappa * a.d / r;
    Ok((dt / t).im)
}
