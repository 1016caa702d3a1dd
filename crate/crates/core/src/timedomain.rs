//! Direct integration of the nonlinear equations of motion and harmonic
//! extraction, used as an independent check of the sideband solver.
//!
//! In the frame rotating at the pump frequency:
//!   ċ  = −(iΔ_c + κ/2)c + ig(b₁* + b₁)c + ε_l + ε_p e^{−iξt − iφ_pl}
//!   ḃ₁ = −(iω₁ + γ₁/2)b₁ + ig|c|² − iλb₂ + ε₁ e^{−iξt − iφ₁}
//!   ḃ₂ = −(iω₂ + γ₂/2)b₂ − iλb₁ + ε₂ e^{−iξt − iφ₂}
//! The mechanical drives use the raw phases φᵢ; the mixing phases
//! Φᵢ = φᵢ + φ_l − φ_p are never formed here.

use std::f64::consts::TAU;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{OmitError, Result};
use crate::params::{DriveConfig, SystemParams};
use crate::sideband::{solve_first_order, solve_second_order, SidebandBlock};
use crate::steady::{ser_c, SteadyState};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Upper bound on integration steps for a single run.
pub const MAX_STEPS: usize = 200_000_000;

/// Field values (c, b₁, b₂) at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub c: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
}

impl State {
    pub fn from_steady(ss: &SteadyState) -> Self {
        State { c: ss.c_s, b1: ss.b1_s, b2: ss.b2_s }
    }

    fn axpy(&self, h: f64, k: &State) -> State {
        State { c: self.c + h * k.c, b1: self.b1 + h * k.b1, b2: self.b2 + h * k.b2 }
    }

    fn is_finite(&self) -> bool {
        [self.c, self.b1, self.b2].iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Time-independent part of the right-hand side plus the drive amplitudes.
struct Eom {
    pc: Complex64,
    p1: Complex64,
    p2: Complex64,
    g: f64,
    lambda: f64,
    eps_l: f64,
    probe: Complex64,
    drive1: Complex64,
    drive2: Complex64,
    xi: f64,
}

impl Eom {
    fn new(sp: &SystemParams, dc: &DriveConfig) -> Self {
        let ph = |eps: f64, phi: f64| eps * Complex64::from_polar(1.0, -phi);
        Eom {
            pc: Complex64::new(sp.kappa / 2.0, dc.delta_c),
            p1: Complex64::new(sp.gamma[0] / 2.0, sp.omega_m[0]),
            p2: Complex64::new(sp.gamma[1] / 2.0, sp.omega_m[1]),
            g: sp.g,
            lambda: sp.lambda,
            eps_l: dc.eps_l,
            probe: ph(dc.eps_p, dc.phi_pl()),
            drive1: ph(dc.eps_mech[0], dc.phi_mech[0]),
            drive2: ph(dc.eps_mech[1], dc.phi_mech[1]),
            xi: dc.xi,
        }
    }

    fn rhs(&self, t: f64, s: &State) -> State {
        let beat = Complex64::from_polar(1.0, -self.xi * t);
        let x = 2.0 * s.b1.re;
        State {
            c: -self.pc * s.c + I * self.g * x * s.c + self.eps_l + self.probe * beat,
            b1: -self.p1 * s.b1 + I * self.g * s.c.norm_sqr() - I * self.lambda * s.b2 + self.drive1 * beat,
            b2: -self.p2 * s.b2 - I * self.lambda * s.b1 + self.drive2 * beat,
        }
    }

    fn rk4(&self, t: f64, s: &State, h: f64) -> State {
        let k1 = self.rhs(t, s);
        let k2 = self.rhs(t + h / 2.0, &s.axpy(h / 2.0, &k1));
        let k3 = self.rhs(t + h / 2.0, &s.axpy(h / 2.0, &k2));
        let k4 = self.rhs(t + h, &s.axpy(h, &k3));
        State {
            c: s.c + h / 6.0 * (k1.c + 2.0 * k2.c + 2.0 * k3.c + k4.c),
            b1: s.b1 + h / 6.0 * (k1.b1 + 2.0 * k2.b1 + 2.0 * k3.b1 + k4.b1),
            b2: s.b2 + h / 6.0 * (k1.b2 + 2.0 * k2.b2 + 2.0 * k3.b2 + k4.b2),
        }
    }
}

/// Sampled solution on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub c: Vec<Complex64>,
    pub b1: Vec<Complex64>,
    pub b2: Vec<Complex64>,
    pub dt: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<State> {
        let n = self.len().checked_sub(1)?;
        Some(State { c: self.c[n], b1: self.b1[n], b2: self.b2[n] })
    }

    /// Debug dump: `t, re_c, im_c, re_b1, im_b1, re_b2, im_b2`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,re_c,im_c,re_b1,im_b1,re_b2,im_b2")?;
        for i in 0..self.len() {
            let (c, b1, b2) = (self.c[i], self.b1[i], self.b2[i]);
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.times[i], c.re, c.im, b1.re, b1.im, b2.re, b2.im
            )?;
        }
        Ok(())
    }
}

/// Largest step allowed for a given configuration: 5% of the shortest of the
/// mechanical, detuning and beat periods.
pub fn max_step(sp: &SystemParams, dc: &DriveConfig) -> f64 {
    let f = fastest_frequency(sp, dc);
    if f == 0.0 {
        f64::INFINITY
    } else {
        0.05 * TAU / f
    }
}

fn fastest_frequency(sp: &SystemParams, dc: &DriveConfig) -> f64 {
    [sp.omega_m[0], sp.omega_m[1], dc.delta_c.abs(), dc.xi.abs()].into_iter().fold(0.0, f64::max)
}

/// Default step 2π/(200·fastest frequency).
pub fn default_step(sp: &SystemParams, dc: &DriveConfig) -> f64 {
    TAU / (200.0 * fastest_frequency(sp, dc))
}

fn run(
    sp: &SystemParams,
    dc: &DriveConfig,
    init: State,
    dt: f64,
    n_steps: usize,
    record_from: usize,
) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(OmitError::param("dt", "step must be positive and finite"));
    }
    if dt >= max_step(sp, dc) {
        return Err(OmitError::param(
            "dt",
            format!("step {dt:e} s exceeds 5% of the shortest period ({:e} s)", max_step(sp, dc)),
        ));
    }
    if n_steps > MAX_STEPS {
        return Err(OmitError::param("t_end", format!("{n_steps} steps exceed the limit of {MAX_STEPS}")));
    }
    if !init.is_finite() {
        return Err(OmitError::Divergence { time: 0.0 });
    }
    let eom = Eom::new(sp, dc);
    let cap = n_steps + 1 - record_from.min(n_steps + 1);
    let mut traj = Trajectory {
        times: Vec::with_capacity(cap),
        c: Vec::with_capacity(cap),
        b1: Vec::with_capacity(cap),
        b2: Vec::with_capacity(cap),
        dt,
    };
    let mut s = init;
    for n in 0..=n_steps {
        let t = n as f64 * dt;
        if n >= record_from {
            traj.times.push(t);
            traj.c.push(s.c);
            traj.b1.push(s.b1);
            traj.b2.push(s.b2);
        }
        if n == n_steps {
            break;
        }
        s = eom.rk4(t, &s, dt);
        if !s.is_finite() {
            return Err(OmitError::Divergence { time: t + dt });
        }
    }
    Ok(traj)
}

/// Fixed-step RK4 from `init` over [0, t_end], every step recorded.
pub fn integrate_eom(sp: &SystemParams, dc: &DriveConfig, init: State, t_end: f64, dt: f64) -> Result<Trajectory> {
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(OmitError::param("t_end", "must be non-negative and finite"));
    }
    let n = (t_end / dt).round() as usize;
    run(sp, dc, init, dt, n, 0)
}

/// As [`integrate_eom`] but only the steps from `record_from` onward are kept.
pub fn integrate_window(
    sp: &SystemParams,
    dc: &DriveConfig,
    init: State,
    dt: f64,
    n_steps: usize,
    record_from: usize,
) -> Result<Trajectory> {
    run(sp, dc, init, dt, n_steps, record_from)
}

/// Fourier coefficients of each field, f(t) ≈ Σ_k C_k e^{−ikξt}, k ∈ {−2..2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarmonicDecomposition {
    pub xi: f64,
    /// `fields[f][k + 2]` for f ∈ {c, b₁, b₂}.
    #[serde(serialize_with = "ser_fields")]
    pub fields: [[Complex64; 5]; 3],
    /// Largest change between the two window halves, relative to the dominant coefficient.
    pub leakage_estimate: f64,
    pub periods: usize,
}

fn ser_fields<S: serde::Serializer>(f: &[[Complex64; 5]; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<[f64; 2]>> = f.iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect();
    v.serialize(s)
}

impl HarmonicDecomposition {
    /// Coefficient of e^{−ikξt} in field `f` (0 = c, 1 = b₁, 2 = b₂).
    pub fn coeff(&self, f: usize, k: i32) -> Complex64 {
        self.fields[f][(k + 2) as usize]
    }
}

fn project(series: [&[Complex64]; 3], phases: &[Complex64], lo: usize, hi: usize) -> [[Complex64; 5]; 3] {
    // trapezoid on [lo, hi] with e^{+ikξt}; phases[j] = e^{iξt_j}
    let n = (hi - lo) as f64;
    let mut out = [[Complex64::new(0.0, 0.0); 5]; 3];
    for j in lo..=hi {
        let w = if j == lo || j == hi { 0.5 } else { 1.0 };
        let e1 = phases[j];
        let e2 = e1 * e1;
        let basis = [e2.conj(), e1.conj(), Complex64::new(1.0, 0.0), e1, e2];
        for (f, s) in series.iter().enumerate() {
            let v = w * s[j];
            for k in 0..5 {
                out[f][k] += v * basis[k];
            }
        }
    }
    for row in out.iter_mut() {
        for z in row.iter_mut() {
            *z /= n;
        }
    }
    out
}

/// Project the recorded samples inside `window` = (t_start, t_stop) on
/// e^{ikξt}, using the largest whole number of beat periods that fits.
///
/// The grid step must divide the beat period.
pub fn extract_harmonics(traj: &Trajectory, xi: f64, window: (f64, f64)) -> Result<HarmonicDecomposition> {
    if !(xi > 0.0) {
        return Err(OmitError::Window("beat frequency must be positive".into()));
    }
    if traj.len() < 2 {
        return Err(OmitError::Window("trajectory has fewer than two samples".into()));
    }
    let period = TAU / xi;
    let per = period / traj.dt;
    let n_per = per.round() as usize;
    if n_per == 0 || (per - n_per as f64).abs() > 1e-6 * per {
        return Err(OmitError::Window(format!("step does not divide the beat period ({per} steps)")));
    }
    let t0 = traj.times[0];
    let lo = ((window.0 - t0) / traj.dt).round().max(0.0) as usize;
    let last = traj.len() - 1;
    let hi_t = ((window.1 - t0) / traj.dt + 1e-6).floor() as isize;
    let hi = (hi_t.max(0) as usize).min(last);
    let periods = if hi > lo { (hi - lo) / n_per } else { 0 };
    if periods < 1 {
        return Err(OmitError::Window(format!(
            "window [{:e}, {:e}] s is shorter than one beat period {period:e} s",
            window.0, window.1
        )));
    }
    let hi = lo + periods * n_per;
    let phases: Vec<Complex64> = traj.times.iter().map(|t| Complex64::from_polar(1.0, xi * t)).collect();
    let series = [&traj.c[..], &traj.b1[..], &traj.b2[..]];
    let fields = project(series, &phases, lo, hi);
    let leakage_estimate = if periods >= 2 {
        let mid = lo + (periods / 2) * n_per;
        let a = project(series, &phases, lo, mid);
        let b = project(series, &phases, mid, hi);
        let dominant = fields.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
        let diff = a
            .iter()
            .flatten()
            .zip(b.iter().flatten())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        if dominant > 0.0 {
            diff / dominant
        } else {
            0.0
        }
    } else {
        f64::INFINITY
    };
    Ok(HarmonicDecomposition { xi, fields, leakage_estimate, periods })
}

/// Grid and window choices for the oracle run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleOptions {
    /// Steps per period of the fastest frequency.
    pub samples_per_fast_period: f64,
    /// Discarded transient in units of 1/min(γ₁, γ₂, κ).
    pub transient_factor: f64,
    /// Beat periods in the projection window.
    pub window_periods: usize,
    /// Repeat at half the step to estimate the integration error.
    pub step_halving: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { samples_per_fast_period: 200.0, transient_factor: 10.0, window_periods: 40, step_halving: true }
    }
}

/// Integration grid aligned to the beat period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleGrid {
    pub dt: f64,
    pub steps_per_period: usize,
    pub transient_periods: usize,
    pub window_periods: usize,
}

impl OracleGrid {
    pub fn new(sp: &SystemParams, dc: &DriveConfig, opts: &OracleOptions) -> Result<Self> {
        if !(dc.xi > 0.0) {
            return Err(OmitError::Window("oracle needs a positive beat frequency".into()));
        }
        if opts.window_periods < 1 {
            return Err(OmitError::param("window_periods", "must be at least 1"));
        }
        let period = TAU / dc.xi;
        let steps_per_period = (opts.samples_per_fast_period * fastest_frequency(sp, dc) / dc.xi).ceil() as usize;
        let slowest = sp.gamma[0].min(sp.gamma[1]).min(sp.kappa);
        if !(slowest > 0.0) {
            return Err(OmitError::param("gamma", "transient length needs positive damping"));
        }
        let transient_periods = (opts.transient_factor / slowest / period).ceil() as usize;
        Ok(OracleGrid {
            dt: period / steps_per_period as f64,
            steps_per_period,
            transient_periods,
            window_periods: opts.window_periods,
        })
    }

    pub fn halved(&self) -> Self {
        OracleGrid { dt: self.dt / 2.0, steps_per_period: 2 * self.steps_per_period, ..*self }
    }

    pub fn total_steps(&self) -> usize {
        (self.transient_periods + self.window_periods) * self.steps_per_period
    }

    fn record_from(&self) -> usize {
        self.transient_periods * self.steps_per_period
    }
}

/// Integrate from the steady state on `grid` and project the window.
pub fn simulate_harmonics(
    sp: &SystemParams,
    ss: &SteadyState,
    dc: &DriveConfig,
    grid: &OracleGrid,
) -> Result<HarmonicDecomposition> {
    let traj = integrate_window(sp, dc, State::from_steady(ss), grid.dt, grid.total_steps(), grid.record_from())?;
    let t0 = traj.times[0];
    extract_harmonics(&traj, dc.xi, (t0, t0 + grid.window_periods as f64 * TAU / dc.xi))
}

/// Time-domain against frequency-domain amplitudes at one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleReport {
    pub grid: OracleGrid,
    pub harmonics: HarmonicDecomposition,
    #[serde(serialize_with = "ser_c")]
    pub a1m_time: Complex64,
    #[serde(serialize_with = "ser_c")]
    pub a1m_freq: Complex64,
    pub a1m_rel_err: f64,
    #[serde(serialize_with = "ser_c")]
    pub b1m_time: Complex64,
    #[serde(serialize_with = "ser_c")]
    pub b1m_freq: Complex64,
    pub b1m_rel_err: f64,
    #[serde(serialize_with = "ser_c")]
    pub a2m_time: Complex64,
    #[serde(serialize_with = "ser_c")]
    pub a2m_freq: Complex64,
    pub a2m_rel_err: f64,
    /// |A₁⁻(dt) − A₁⁻(dt/2)| / |A₁⁻|, when step halving was requested.
    pub step_halving_rel: Option<f64>,
}

fn rel_err(a: Complex64, b: Complex64) -> f64 {
    let s = b.norm();
    if s == 0.0 {
        a.norm()
    } else {
        (a - b).norm() / s
    }
}

pub fn run_oracle(sp: &SystemParams, ss: &SteadyState, dc: &DriveConfig, opts: &OracleOptions) -> Result<OracleReport> {
    let first: SidebandBlock = solve_first_order(sp, ss, dc)?;
    let second = solve_second_order(sp, ss, dc, &first)?;
    let grid = OracleGrid::new(sp, dc, opts)?;
    let h = simulate_harmonics(sp, ss, dc, &grid)?;
    let step_halving_rel = if opts.step_halving {
        let h2 = simulate_harmonics(sp, ss, dc, &grid.halved())?;
        Some(rel_err(h.coeff(0, 1), h2.coeff(0, 1)))
    } else {
        None
    };
    let (a1t, b1t, a2t) = (h.coeff(0, 1), h.coeff(1, 1), h.coeff(0, 2));
    Ok(OracleReport {
        grid,
        harmonics: h,
        a1m_time: a1t,
        a1m_freq: first.a_m,
        a1m_rel_err: rel_err(a1t, first.a_m),
        b1m_time: b1t,
        b1m_freq: first.b_m,
        b1m_rel_err: rel_err(b1t, first.b_m),
        a2m_time: a2t,
        a2m_freq: second.a_m,
        a2m_rel_err: rel_err(a2t, second.a_m),
        step_halving_rel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Scenario;

    fn synthetic(dt: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Trajectory {
        let times: Vec<f64> = (0..n).map(|i| i as f64 * dt).collect();
        let c: Vec<Complex64> = times.iter().map(|t| f(*t)).collect();
        let z = vec![Complex64::new(0.0, 0.0); n];
        Trajectory { times, c, b1: z.clone(), b2: z, dt }
    }

    #[test]
    fn constant_signal_has_only_dc() {
        let xi = 3.0;
        let dt = TAU / xi / 64.0;
        let tr = synthetic(dt, 64 * 5 + 1, |_| Complex64::new(2.0, -1.0));
        let h = extract_harmonics(&tr, xi, (0.0, 1e9)).unwrap();
        assert_eq!(h.periods, 5);
        assert!((h.coeff(0, 0) - Complex64::new(2.0, -1.0)).norm() < 1e-14);
        for k in [-2, -1, 1, 2] {
            assert!(h.coeff(0, k).norm() < 1e-14);
        }
    }

    #[test]
    fn pure_tone_is_orthogonal() {
        let xi = 1.7;
        let dt = TAU / xi / 50.0;
        let tr = synthetic(dt, 50 * 20 + 1, |t| Complex64::from_polar(1.0, -xi * t));
        let h = extract_harmonics(&tr, xi, (0.0, 1e9)).unwrap();
        assert!((h.coeff(0, 1) - 1.0).norm() < 1e-12);
        for k in [-2, -1, 0, 2] {
            assert!(h.coeff(0, k).norm() < 1e-12, "k = {k}");
        }
        assert!(h.leakage_estimate < 1e-12);
    }

    #[test]
    fn short_window_is_rejected() {
        let xi = 1.0;
        let dt = TAU / 40.0;
        let tr = synthetic(dt, 200, |_| Complex64::new(1.0, 0.0));
        assert!(matches!(extract_harmonics(&tr, xi, (0.0, 0.9 * TAU)), Err(OmitError::Window(_))));
        let bad = Trajectory { dt: TAU / 40.5, ..tr };
        assert!(extract_harmonics(&bad, xi, (0.0, 1e9)).is_err());
    }

    fn reference_point() -> (SystemParams, DriveConfig, SteadyState) {
        let p = Scenario::reference().operating_point().unwrap();
        (p.sp, p.dc, p.ss)
    }

    #[test]
    fn fixed_point_stays_put() {
        let (sp, dc, ss) = reference_point();
        let dc = dc.with_probe(0.0, 0.0);
        let dt = default_step(&sp, &dc);
        let t_end = 100.0 * TAU / sp.omega_m[0];
        let tr = integrate_eom(&sp, &dc, State::from_steady(&ss), t_end, dt).unwrap();
        let init = State::from_steady(&ss);
        for i in 0..tr.len() {
            assert!((tr.c[i] - init.c).norm() <= 1e-8 * init.c.norm());
            assert!((tr.b1[i] - init.b1).norm() <= 1e-8 * init.b1.norm());
            assert!((tr.b2[i] - init.b2).norm() <= 1e-8 * init.b2.norm());
        }
    }

    #[test]
    fn bare_cavity_decay() {
        let (sp, dc, _) = reference_point();
        let dc = DriveConfig::from_amplitude(&sp, 0.0, dc.delta_c);
        let init = State { c: Complex64::new(1.0, 0.0), b1: Complex64::new(0.0, 0.0), b2: Complex64::new(0.0, 0.0) };
        let sp0 = sp.with_g(0.0);
        let dt = default_step(&sp0, &dc);
        let tr = integrate_eom(&sp0, &dc, init, 5.0 / sp.kappa, dt).unwrap();
        for (t, c) in tr.times.iter().zip(&tr.c) {
            assert!((c.norm() - (-sp.kappa * t / 2.0).exp()).abs() < 1e-6);
        }
    }

    #[test]
    fn step_halving_shows_fourth_order() {
        let (sp, dc, ss) = reference_point();
        let dc = dc.with_mech_drive(1, 0.5 * dc.eps_p, 0.3);
        let dt = max_step(&sp, &dc) / 2.0;
        let t_end = 400.0 * dt;
        let end = |h: f64| integrate_eom(&sp, &dc, State::from_steady(&ss), t_end, h).unwrap().last().unwrap();
        let (y1, y2, y4) = (end(dt), end(dt / 2.0), end(dt / 4.0));
        let d = |a: &State, b: &State| (a.c - b.c).norm() + (a.b1 - b.b1).norm() + (a.b2 - b.b2).norm();
        let ratio = d(&y1, &y2) / d(&y2, &y4);
        assert!((ratio - 16.0).abs() < 2.0, "ratio {ratio}");
    }

    #[test]
    fn oversized_step_is_rejected() {
        let (sp, dc, ss) = reference_point();
        let dt = max_step(&sp, &dc) * 1.01;
        assert!(matches!(
            integrate_eom(&sp, &dc, State::from_steady(&ss), 1e-6, dt),
            Err(OmitError::InvalidParameter { .. })
        ));
    }

    #[test]
    fn blow_up_reports_time() {
        let (mut sp, dc, _) = reference_point();
        sp.kappa = -1e9;
        let init = State { c: Complex64::new(1e300, 0.0), ..State::from_steady(&Scenario::reference().operating_point().unwrap().ss) };
        let err = integrate_eom(&sp, &dc, init, 1e-5, default_step(&sp, &dc)).unwrap_err();
        assert!(matches!(err, OmitError::Divergence { time } if time > 0.0));
    }

    #[test]
    fn csv_dump_has_header_and_rows() {
        let tr = synthetic(0.1, 3, |t| Complex64::new(t, -t));
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,re_c,im_c,re_b1,im_b1,re_b2,im_b2");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[2].split(',').count(), 7);
    }
}
