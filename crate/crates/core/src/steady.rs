//! Mean-field steady state and the photon-number cubic.

use num_complex::Complex64;
use serde::Serialize;

use crate::cubic::{self, RESIDUAL_TOLERANCE};
use crate::error::{OmitError, Result};
use crate::params::{DriveConfig, PumpConvention, SystemParams};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Coefficients of a3 x³ + a2 x² + a1 x + a0 = 0 in x = |c_s|².
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicCoefficients {
    pub a3: f64,
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
    /// Static mechanical susceptibility W, so that Δ = Δ_c − W g² x.
    pub w: f64,
}

impl CubicCoefficients {
    /// Ascending order (a0, a1, a2, a3).
    pub fn ascending(&self) -> [f64; 4] {
        [self.a0, self.a1, self.a2, self.a3]
    }

    /// Signs of (a3, a2, a1, a0).
    pub fn sign_sequence(&self) -> [i8; 4] {
        let s = |v: f64| {
            if v > 0.0 {
                1
            } else if v < 0.0 {
                -1
            } else {
                0
            }
        };
        [s(self.a3), s(self.a2), s(self.a1), s(self.a0)]
    }
}

fn mech_poles(sp: &SystemParams) -> (Complex64, Complex64) {
    (
        Complex64::new(sp.gamma[0] / 2.0, sp.omega_m[0]),
        Complex64::new(sp.gamma[1] / 2.0, sp.omega_m[1]),
    )
}

/// Static mechanical amplitudes (b_1s, b_2s) for photon number x, from the
/// exact solution of the coupled 2×2 mechanical subsystem.
pub fn mechanical_response(sp: &SystemParams, x: f64) -> (Complex64, Complex64) {
    let (a1, a2) = mech_poles(sp);
    let den = a1 * a2 + sp.lambda * sp.lambda;
    let b1 = I * sp.g * x * a2 / den;
    let b2 = -I * sp.lambda * b1 / a2;
    (b1, b2)
}

/// W = 2 Re[i a_2 / (a_1 a_2 + λ²)] with a_i = iω_{m,i} + γ_i/2.
///
/// Written out this is 2[ω₁(ω₂² + γ₂²/4) − λ²ω₂] / |a₁a₂ + λ²|², which
/// coincides with the usual expanded denominator for degenerate resonators.
pub fn susceptibility_w(sp: &SystemParams) -> f64 {
    let (w1, w2) = (sp.omega_m[0], sp.omega_m[1]);
    let (a1, a2) = mech_poles(sp);
    let den = (a1 * a2 + sp.lambda * sp.lambda).norm_sqr();
    let g2 = sp.gamma[1];
    2.0 * (w1 * (w2 * w2 + g2 * g2 / 4.0) - sp.lambda * sp.lambda * w2) / den
}

pub fn cubic_coeffs(sp: &SystemParams, dc: &DriveConfig) -> CubicCoefficients {
    let w = susceptibility_w(sp);
    let g2 = sp.g * sp.g;
    CubicCoefficients {
        a3: w * w * g2 * g2,
        a2: -2.0 * dc.delta_c * w * g2,
        a1: sp.kappa * sp.kappa / 4.0 + dc.delta_c * dc.delta_c,
        a0: -dc.eps_l * dc.eps_l,
        w,
    }
}

/// Non-negative real photon numbers of one operating point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhotonBranches {
    /// Ascending, each verified against the cubic.
    pub roots: Vec<f64>,
    pub fold: bool,
    pub descartes_bound: usize,
}

pub fn photon_number_branches(cc: &CubicCoefficients) -> Result<PhotonBranches> {
    if cc.a3 < 0.0 {
        return Err(OmitError::param("a3", "leading coefficient must be non-negative"));
    }
    let c = cc.ascending();
    let all = cubic::real_roots(&c);
    let scale = all.roots.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let mut roots = Vec::with_capacity(3);
    for r in all.roots {
        let x = if r < 0.0 && r.abs() <= 1e-12 * scale { 0.0 } else { r };
        if x < 0.0 {
            continue;
        }
        let res = cubic::relative_residual(&c, x);
        if res >= RESIDUAL_TOLERANCE {
            return Err(OmitError::NumericalInconsistency(format!(
                "cubic root {x:e} has relative residual {res:e}"
            )));
        }
        roots.push(x);
    }
    if roots.is_empty() {
        // a0 ≤ 0 ≤ a1 guarantees a non-negative root for physical input
        return Err(OmitError::NumericalInconsistency("no non-negative photon number".into()));
    }
    Ok(PhotonBranches { roots, fold: all.fold, descartes_bound: cubic::descartes_bound(&c) })
}

/// Which root of the cubic to take as the operating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchPolicy {
    /// The branch reached by ramping the pump up from zero. For the
    /// Kerr-type S-curve this is always the smallest root.
    #[default]
    AdiabaticLower,
    Lower,
    Middle,
    Upper,
}

impl BranchPolicy {
    pub fn name(self) -> &'static str {
        match self {
            BranchPolicy::AdiabaticLower => "adiabatic-lower",
            BranchPolicy::Lower => "lower",
            BranchPolicy::Middle => "middle",
            BranchPolicy::Upper => "upper",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "adiabatic-lower" => Some(BranchPolicy::AdiabaticLower),
            "lower" => Some(BranchPolicy::Lower),
            "middle" => Some(BranchPolicy::Middle),
            "upper" => Some(BranchPolicy::Upper),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchLabel {
    Lower,
    Middle,
    Upper,
    Unique,
}

impl BranchLabel {
    pub fn name(self) -> &'static str {
        match self {
            BranchLabel::Lower => "lower",
            BranchLabel::Middle => "middle",
            BranchLabel::Upper => "upper",
            BranchLabel::Unique => "unique",
        }
    }
}

fn select_branch(roots: &[f64], policy: BranchPolicy) -> Result<(f64, BranchLabel)> {
    let n = roots.len();
    let label_of = |i: usize| match (n, i) {
        (1, _) => BranchLabel::Unique,
        (_, 0) => BranchLabel::Lower,
        (_, i) if i == n - 1 => BranchLabel::Upper,
        _ => BranchLabel::Middle,
    };
    let idx = match policy {
        BranchPolicy::AdiabaticLower => Some(0),
        BranchPolicy::Lower if n >= 2 => Some(0),
        BranchPolicy::Upper if n >= 2 => Some(n - 1),
        BranchPolicy::Middle if n == 3 => Some(1),
        _ => None,
    };
    match idx {
        Some(i) => Ok((roots[i], label_of(i))),
        None => Err(OmitError::BranchNotAvailable { requested: policy.name(), available: n }),
    }
}

/// Self-consistent mean fields of one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteadyState {
    #[serde(serialize_with = "ser_c")]
    pub c_s: Complex64,
    #[serde(serialize_with = "ser_c")]
    pub b1_s: Complex64,
    #[serde(serialize_with = "ser_c")]
    pub b2_s: Complex64,
    /// Effective detuning Δ = Δ_c − g(b_1s* + b_1s).
    pub delta_eff: f64,
    /// |c_s|².
    pub photon_number: f64,
    pub branch: BranchLabel,
    pub n_branches: usize,
}

pub(crate) fn ser_c<S: serde::Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&c.re)?;
    t.serialize_element(&c.im)?;
    t.end()
}

impl SteadyState {
    /// Effective optomechanical coupling G = g c_s.
    pub fn g_eff(&self, sp: &SystemParams) -> Complex64 {
        sp.g * self.c_s
    }
}

/// Rebuild the mean fields from a photon number taken from the cubic.
pub fn steady_from_photon_number(
    sp: &SystemParams,
    dc: &DriveConfig,
    x: f64,
    branch: BranchLabel,
    n_branches: usize,
) -> SteadyState {
    let (b1_s, b2_s) = mechanical_response(sp, x);
    let delta_eff = dc.delta_c - 2.0 * sp.g * b1_s.re;
    let c_s = dc.eps_l / Complex64::new(sp.kappa / 2.0, delta_eff);
    SteadyState {
        c_s,
        b1_s,
        b2_s,
        delta_eff,
        photon_number: c_s.norm_sqr(),
        branch,
        n_branches,
    }
}

pub fn solve_steady(sp: &SystemParams, dc: &DriveConfig, policy: BranchPolicy) -> Result<SteadyState> {
    let cc = cubic_coeffs(sp, dc);
    let br = photon_number_branches(&cc)?;
    let (x, label) = select_branch(&br.roots, policy)?;
    Ok(steady_from_photon_number(sp, dc, x, label, br.roots.len()))
}

/// Back-substitution residual of the steady-state equations.
///
/// The optical equation is measured against |ε_l|, the mechanical ones
/// against their radiation-pressure source g|c_s|².
pub fn residual(sp: &SystemParams, dc: &DriveConfig, ss: &SteadyState) -> f64 {
    let (a1, a2) = mech_poles(sp);
    let c = ss.c_s;
    let x = c.norm_sqr();
    let rc = -Complex64::new(sp.kappa / 2.0, dc.delta_c) * c
        + I * sp.g * (ss.b1_s.conj() + ss.b1_s) * c
        + dc.eps_l;
    let rb1 = -a1 * ss.b1_s + I * sp.g * x - I * sp.lambda * ss.b2_s;
    let rb2 = -a2 * ss.b2_s - I * sp.lambda * ss.b1_s;
    let opt_scale = dc.eps_l.abs();
    let mech_scale = sp.g * x;
    let rel = |r: Complex64, s: f64| if s > 0.0 { r.norm() / s } else { r.norm() };
    rel(rc, opt_scale).max(rel(rb1, mech_scale)).max(rel(rb2, mech_scale))
}

/// Bare detuning Δ_c that places the effective detuning exactly on the red
/// sideband (Δ = ω_{m,1}) for pump amplitude ε_l.
pub fn red_sideband_delta_c(sp: &SystemParams, eps_l: f64) -> f64 {
    let w1 = sp.omega_m[0];
    let x = eps_l * eps_l / (w1 * w1 + sp.kappa * sp.kappa / 4.0);
    let (b1, _) = mechanical_response(sp, x);
    w1 + 2.0 * sp.g * b1.re
}

/// How the bare detuning follows the pump in a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetuningMode {
    /// Δ_c re-solved at every power so that Δ = ω_{m,1}.
    RedSideband,
    /// Δ_c held fixed, rad/s.
    Fixed(f64),
}

impl DetuningMode {
    pub fn delta_c(&self, sp: &SystemParams, eps_l: f64) -> f64 {
        match *self {
            DetuningMode::RedSideband => red_sideband_delta_c(sp, eps_l),
            DetuningMode::Fixed(d) => d,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    /// Pump power, W.
    pub pump_power: f64,
    pub delta_c: f64,
    pub roots: Vec<f64>,
    pub fold: bool,
}

/// Photon-number branches over `n` equally spaced powers in [p_start, p_stop] (W).
pub fn bistability_sweep(
    sp: &SystemParams,
    p_start: f64,
    p_stop: f64,
    n: usize,
    mode: DetuningMode,
    convention: PumpConvention,
) -> Result<Vec<SweepRow>> {
    if n < 2 {
        return Err(OmitError::param("n", "a sweep needs at least 2 points"));
    }
    (0..n)
        .map(|k| {
            let p = p_start + (p_stop - p_start) * k as f64 / (n - 1) as f64;
            let probe = DriveConfig::from_pump_power(sp, p, 0.0, convention)?;
            let delta_c = mode.delta_c(sp, probe.eps_l);
            let dc = DriveConfig::from_pump_power(sp, p, delta_c, convention)?;
            let br = photon_number_branches(&cubic_coeffs(sp, &dc))?;
            Ok(SweepRow { pump_power: p, delta_c, roots: br.roots, fold: br.fold })
        })
        .collect()
}
