//! First- and second-order sideband response.
//!
//! Substituting δo = O₁⁻e^{−iξt} + O₁⁺e^{iξt} + O₂⁻e^{−2iξt} + O₂⁺e^{2iξt}
//! into the equations of motion and collecting e^{−iξt} (e^{−2iξt}) terms of
//! each field and of its conjugate gives two 6×6 linear systems in
//! (A⁻, A⁺*, B⁻, B⁺*, D⁻, D⁺*). The direct dense solve is authoritative; the
//! closed forms in [`closed`] are carried as cross-checks.

mod closed;
mod observe;

pub use closed::{a1m_closed, a1m_closed_dual, a2m_closed, Dual};
pub use observe::{
    efficiency_2nd, group_delay, group_delay_analytic, literal_turning_point, transmission, transmission_at,
    turning_point, GroupDelay, TurningPoint,
};

use nalgebra::{Matrix6, Vector6};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{OmitError, Result};
use crate::params::{DriveConfig, SystemParams};
use crate::steady::{ser_c, SteadyState};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerated relative back-substitution residual of the linear systems.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Denominator coefficients and their composites at one beat frequency ξ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicCoefficients {
    /// h₁..h₆, each as (h⁺, h⁻).
    pub h: [(Complex64, Complex64); 6],
    pub u1: (Complex64, Complex64),
    pub u2: (Complex64, Complex64),
    pub pi: Complex64,
    pub gamma: Complex64,
    pub g_eff: Complex64,
    pub delta: f64,
    pub lambda: f64,
    pub xi: f64,
}

pub fn h_coeffs(sp: &SystemParams, ss: &SteadyState, xi: f64) -> HarmonicCoefficients {
    let pair = |w: f64, rate: f64, n: f64| {
        (Complex64::new(rate / 2.0, w - n * xi), Complex64::new(rate / 2.0, -w - n * xi))
    };
    let d = ss.delta_eff;
    let (w1, w2) = (sp.omega_m[0], sp.omega_m[1]);
    let h = [
        pair(d, sp.kappa, 1.0),
        pair(w1, sp.gamma[0], 1.0),
        pair(w2, sp.gamma[1], 1.0),
        pair(d, sp.kappa, 2.0),
        pair(w1, sp.gamma[0], 2.0),
        pair(w2, sp.gamma[1], 2.0),
    ];
    let l2 = sp.lambda * sp.lambda;
    let u1 = (h[1].0 * h[2].0 + l2, h[1].1 * h[2].1 + l2);
    let u2 = (h[4].0 * h[5].0 + l2, h[4].1 * h[5].1 + l2);
    HarmonicCoefficients {
        h,
        u1,
        u2,
        pi: h[2].1 * u1.0 - h[2].0 * u1.1,
        gamma: u2.0 * h[5].1 - u2.1 * h[5].0,
        g_eff: ss.g_eff(sp),
        delta: d,
        lambda: sp.lambda,
        xi,
    }
}

impl HarmonicCoefficients {
    /// Name of the coefficient with the smallest modulus in the given order block.
    fn smallest(&self, second: bool) -> String {
        let base = if second { 3 } else { 0 };
        let mut best = (f64::INFINITY, String::new());
        for k in base..base + 3 {
            for (v, sign) in [(self.h[k].0, '+'), (self.h[k].1, '-')] {
                if v.norm() < best.0 {
                    best = (v.norm(), format!("h{}{sign} = {v:e}", k + 1));
                }
            }
        }
        best.1
    }
}

/// Amplitudes of one sideband order, in the unknown order
/// (A⁻, A⁺*, B⁻, B⁺*, D⁻, D⁺*).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SidebandBlock {
    #[serde(serialize_with = "ser_c")]
    pub a_m: Complex64,
    #[serde(serialize_with = "ser_c")]
    pub a_p: Complex64,
    #[serde(serialize_with = "ser_c")]
    pub b_m: Complex64,
    #[serde(serialize_with = "ser_c")]
    pub b_p: Complex64,
    #[serde(serialize_with = "ser_c")]
    pub d_m: Complex64,
    #[serde(serialize_with = "ser_c")]
    pub d_p: Complex64,
    /// Relative back-substitution residual of the direct solve.
    pub residual: f64,
    /// Relative difference between the closed form for A⁻ and the direct
    /// solve; `None` where the closed form is undefined.
    pub closed_form_discrepancy: Option<f64>,
}

impl SidebandBlock {
    fn from_vec(v: &Vector6<Complex64>, residual: f64) -> Self {
        SidebandBlock {
            a_m: v[0],
            a_p: v[1],
            b_m: v[2],
            b_p: v[3],
            d_m: v[4],
            d_p: v[5],
            residual,
            closed_form_discrepancy: None,
        }
    }

    pub fn as_array(&self) -> [Complex64; 6] {
        [self.a_m, self.a_p, self.b_m, self.b_p, self.d_m, self.d_p]
    }
}

/// Coefficient matrix shared by both orders; `order` selects h₁..₃ or h₄..₆.
pub fn sideband_matrix(hc: &HarmonicCoefficients, order: usize) -> Matrix6<Complex64> {
    let o = if order == 1 { 0 } else { 3 };
    let (ha, hb, hc3) = (hc.h[o], hc.h[o + 1], hc.h[o + 2]);
    let g = hc.g_eff;
    let gc = g.conj();
    let l = Complex64::new(0.0, hc.lambda);
    let z = Complex64::new(0.0, 0.0);
    // rows: δc, δc†, δb₁, δb₁†, δb₂, δb₂† equations
    #[rustfmt::skip]
    let m = Matrix6::from_row_slice(&[
        ha.0,    z,      -I * g,  -I * g,  z,     z,
        z,       ha.1,   I * gc,  I * gc,  z,     z,
        -I * gc, -I * g, hb.0,    z,       l,     z,
        I * gc,  I * g,  z,       hb.1,    z,     -l,
        z,       z,      l,       z,       hc3.0, z,
        z,       z,      z,       -l,      z,     hc3.1,
    ]);
    m
}

fn relative_residual(m: &Matrix6<Complex64>, x: &Vector6<Complex64>, r: &Vector6<Complex64>) -> f64 {
    let res = m * x - r;
    let mut worst: f64 = 0.0;
    for i in 0..6 {
        let scale = (0..6).map(|j| (m[(i, j)] * x[j]).norm()).fold(r[i].norm(), f64::max);
        if scale > 0.0 {
            worst = worst.max(res[i].norm() / scale);
        }
    }
    worst
}

fn solve_system(
    m: &Matrix6<Complex64>,
    rhs: &Vector6<Complex64>,
    hc: &HarmonicCoefficients,
    second: bool,
) -> Result<(Vector6<Complex64>, f64)> {
    let lu = m.lu();
    let u = lu.u();
    let diag: Vec<f64> = (0..6).map(|i| u[(i, i)].norm()).collect();
    let dmax = diag.iter().cloned().fold(0.0, f64::max);
    let dmin = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if dmax == 0.0 || dmin <= 1e-14 * dmax {
        return Err(OmitError::Singular(format!(
            "{} sideband system is singular; smallest coefficient {}",
            if second { "second-order" } else { "first-order" },
            hc.smallest(second)
        )));
    }
    let x = lu.solve(rhs).ok_or_else(|| OmitError::Singular(hc.smallest(second)))?;
    if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(OmitError::Singular(format!("non-finite solution; {}", hc.smallest(second))));
    }
    let res = relative_residual(m, &x, rhs);
    Ok((x, res))
}

fn check_residual(res: f64, what: &str) -> Result<()> {
    if res < RESIDUAL_TOLERANCE {
        Ok(())
    } else {
        Err(OmitError::NumericalInconsistency(format!("{what} residual {res:e}")))
    }
}

/// Solve the first-order system at ξ = `dc.xi`.
pub fn solve_first_order(sp: &SystemParams, ss: &SteadyState, dc: &DriveConfig) -> Result<SidebandBlock> {
    let hc = h_coeffs(sp, ss, dc.xi);
    let m = sideband_matrix(&hc, 1);
    let phase = |phi: f64| Complex64::from_polar(1.0, -phi);
    let rhs = Vector6::new(
        dc.eps_p * phase(dc.phi_pl()),
        Complex64::new(0.0, 0.0),
        dc.eps_mech[0] * phase(dc.phi_mech[0]),
        Complex64::new(0.0, 0.0),
        dc.eps_mech[1] * phase(dc.phi_mech[1]),
        Complex64::new(0.0, 0.0),
    );
    let (x, res) = solve_system(&m, &rhs, &hc, false)?;
    check_residual(res, "first-order")?;
    let mut block = SidebandBlock::from_vec(&x, res);
    let cf = a1m_closed(&hc, dc);
    let scale = block.a_m.norm().max(cf.norm());
    block.closed_form_discrepancy = Some(if scale == 0.0 { 0.0 } else { (cf - block.a_m).norm() / scale });
    Ok(block)
}

/// Solve the second-order system, with sources quadratic in the first-order block.
pub fn solve_second_order(
    sp: &SystemParams,
    ss: &SteadyState,
    dc: &DriveConfig,
    first: &SidebandBlock,
) -> Result<SidebandBlock> {
    let hc = h_coeffs(sp, ss, dc.xi);
    let m = sideband_matrix(&hc, 2);
    let g = sp.g;
    let (a, ap, b, bp) = (first.a_m, first.a_p, first.b_m, first.b_p);
    let rhs = Vector6::new(
        I * g * a * (bp + b),
        -I * g * ap * (b + bp),
        I * g * a * ap,
        -I * g * a * ap,
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
    );
    let (x, res) = solve_system(&m, &rhs, &hc, true)?;
    check_residual(res, "second-order")?;
    let mut block = SidebandBlock::from_vec(&x, res);
    block.closed_form_discrepancy = a2m_closed(&hc, sp.g, first).map(|cf| {
        let scale = block.a_m.norm().max(cf.norm());
        if scale == 0.0 {
            0.0
        } else {
            (cf - block.a_m).norm() / scale
        }
    });
    Ok(block)
}

/// Both sideband orders and the derived observables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SidebandSolution {
    pub first: SidebandBlock,
    pub second: SidebandBlock,
    #[serde(serialize_with = "ser_c")]
    pub transmission_t: Complex64,
    pub efficiency_eta: f64,
}

impl SidebandSolution {
    /// |t|².
    pub fn t2(&self) -> f64 {
        self.transmission_t.norm_sqr()
    }
}

pub fn solve(sp: &SystemParams, ss: &SteadyState, dc: &DriveConfig) -> Result<SidebandSolution> {
    let first = solve_first_order(sp, ss, dc)?;
    let second = solve_second_order(sp, ss, dc, &first)?;
    Ok(SidebandSolution {
        transmission_t: transmission(sp, dc, &first)?,
        efficiency_eta: efficiency_2nd(sp, dc, &second)?,
        first,
        second,
    })
}

#[cfg(test)]
mod tests;
