//! Device parameters, unit handling and derived couplings.
//!
//! Everything is stored in SI units with angular frequencies in rad/s.
//! Ordinary frequencies enter only through the config parser, which
//! multiplies by 2π exactly once.

use std::f64::consts::{PI, TAU};

use crate::error::{OmitError, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Coulomb constant k_e = 1/(4π ε_0), N·m²/C².
pub const COULOMB_CONSTANT: f64 = 8.987_551_792_3e9;

/// Physical constants of the cavity and the two mechanical resonators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Cavity angular frequency ω_c.
    pub omega_c: f64,
    /// Cavity length L, m.
    pub cavity_length: f64,
    /// Mechanical angular frequencies ω_{m,1}, ω_{m,2}.
    pub omega_m: [f64; 2],
    /// Effective masses, kg.
    pub mass: [f64; 2],
    /// Mechanical energy decay rates γ_1, γ_2.
    pub gamma: [f64; 2],
    /// Optical energy decay rate κ.
    pub kappa: f64,
    /// Cavity coupling ratio η_c ∈ (0, 1].
    pub eta_c: f64,
    /// Single-photon optomechanical coupling g (MR₁ only).
    pub g: f64,
    /// Phonon-phonon coupling λ.
    pub lambda: f64,
    /// Mechanical quality factor, when the damping was derived from it.
    pub quality_factor: Option<f64>,
}

fn check_positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(OmitError::param(field, format!("must be positive and finite, got {v}")))
    }
}

fn check_non_negative(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(OmitError::param(field, format!("must be non-negative and finite, got {v}")))
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        check_positive("omega_c", self.omega_c)?;
        check_positive("cavity_length", self.cavity_length)?;
        for i in 0..2 {
            check_positive(&format!("omega_m{}", i + 1), self.omega_m[i])?;
            check_positive(&format!("mass{}", i + 1), self.mass[i])?;
            check_positive(&format!("gamma{}", i + 1), self.gamma[i])?;
        }
        check_positive("kappa", self.kappa)?;
        if !(self.eta_c > 0.0 && self.eta_c <= 1.0) {
            return Err(OmitError::param("eta_c", format!("must lie in (0, 1], got {}", self.eta_c)));
        }
        // couplings may vanish (decoupled limits)
        check_non_negative("g", self.g)?;
        check_non_negative("lambda", self.lambda)?;
        if let Some(q) = self.quality_factor {
            check_positive("quality_factor", q)?;
        }
        Ok(())
    }

    /// Zero-point position spread sqrt(ħ / (2 m_i ω_{m,i})) of resonator `i` (0-based).
    pub fn x_zpf(&self, i: usize) -> f64 {
        zero_point_spread(self.mass[i], self.omega_m[i])
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_g(mut self, g: f64) -> Self {
        self.g = g;
        self
    }
}

pub fn zero_point_spread(mass: f64, omega: f64) -> f64 {
    (HBAR / (2.0 * mass * omega)).sqrt()
}

/// How mechanical damping is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Damping {
    /// γ_i = ω_{m,i} / Q for both resonators.
    Quality(f64),
    /// Explicit rates, rad/s.
    Rates([f64; 2]),
}

/// Raw device description before derivation of g and γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceSpec {
    /// Laser wavelength λ_l, m.
    pub wavelength: f64,
    pub cavity_length: f64,
    pub omega_m: [f64; 2],
    pub mass: [f64; 2],
    pub damping: Damping,
    pub kappa: f64,
    pub eta_c: f64,
    /// λ in rad/s.
    pub lambda: f64,
}

/// Derive the full parameter set: ω_c from the wavelength, γ_i from Q and
/// g = (ω_c / L)·x_zpf of MR₁ (Fabry–Pérot dispersive coupling).
pub fn derive_params(raw: &DeviceSpec) -> Result<SystemParams> {
    check_positive("wavelength", raw.wavelength)?;
    check_positive("cavity_length", raw.cavity_length)?;
    for i in 0..2 {
        check_positive(&format!("omega_m{}", i + 1), raw.omega_m[i])?;
        check_positive(&format!("mass{}", i + 1), raw.mass[i])?;
    }
    check_positive("kappa", raw.kappa)?;
    check_non_negative("lambda", raw.lambda)?;

    let omega_c = TAU * SPEED_OF_LIGHT / raw.wavelength;
    let (gamma, quality_factor) = match raw.damping {
        Damping::Quality(q) => {
            check_positive("quality_factor", q)?;
            ([raw.omega_m[0] / q, raw.omega_m[1] / q], Some(q))
        }
        Damping::Rates(r) => {
            check_positive("gamma1", r[0])?;
            check_positive("gamma2", r[1])?;
            (r, None)
        }
    };
    let g = omega_c / raw.cavity_length * zero_point_spread(raw.mass[0], raw.omega_m[0]);

    let sp = SystemParams {
        omega_c,
        cavity_length: raw.cavity_length,
        omega_m: raw.omega_m,
        mass: raw.mass,
        gamma,
        kappa: raw.kappa,
        eta_c: raw.eta_c,
        g,
        lambda: raw.lambda,
        quality_factor,
    };
    sp.validate()?;
    Ok(sp)
}

/// Electrostatic point-coupling geometry between the two resonators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombParams {
    pub k_e: f64,
    /// Equilibrium separation r_0, m.
    pub r0: f64,
    /// Bias capacitances, F.
    pub capacitance: [f64; 2],
    /// Bias voltages, V.
    pub voltage: [f64; 2],
}

impl CoulombParams {
    pub fn charges(&self) -> [f64; 2] {
        [self.capacitance[0] * self.voltage[0], self.capacitance[1] * self.voltage[1]]
    }
}

/// Phonon-phonon coupling from the quadratic expansion of the Coulomb energy:
/// λ = k_e q_1 q_2 / r_0³ · sqrt(ħ / (m_1 m_2 ω_{m,1} ω_{m,2})).
pub fn coulomb_lambda(cp: &CoulombParams, sp: &SystemParams) -> Result<f64> {
    if cp.r0 == 0.0 {
        return Err(OmitError::SingularGeometry("equilibrium separation r0 is zero".into()));
    }
    check_positive("coulomb_r0", cp.r0)?;
    let [q1, q2] = cp.charges();
    let spring = cp.k_e * q1 * q2 / cp.r0.powi(3);
    let zpf = (HBAR / (sp.mass[0] * sp.mass[1] * sp.omega_m[0] * sp.omega_m[1])).sqrt();
    Ok(spring * zpf)
}

/// Mapping from pump power to the pump amplitude ε_l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PumpConvention {
    /// ε_l = sqrt(2 κ P_L / (ħ ω_l))
    #[default]
    TwoKappa,
    /// ε_l = sqrt(2 η_c κ P_L / (ħ ω_l))
    EtaKappa,
    /// ε_l = sqrt(η_c κ P_L / (ħ ω_l)), the amplitude matching the
    /// output relation c_out = c_in − sqrt(η_c κ) c.
    InputOutput,
}

impl PumpConvention {
    pub fn amplitude(self, sp: &SystemParams, power: f64, omega_l: f64) -> f64 {
        let rate = match self {
            PumpConvention::TwoKappa => 2.0 * sp.kappa,
            PumpConvention::EtaKappa => 2.0 * sp.eta_c * sp.kappa,
            PumpConvention::InputOutput => sp.eta_c * sp.kappa,
        };
        (rate * power / (HBAR * omega_l)).sqrt()
    }

    pub fn name(self) -> &'static str {
        match self {
            PumpConvention::TwoKappa => "2kappa",
            PumpConvention::EtaKappa => "eta-kappa",
            PumpConvention::InputOutput => "input-output",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "2kappa" => Some(PumpConvention::TwoKappa),
            "eta-kappa" => Some(PumpConvention::EtaKappa),
            "input-output" => Some(PumpConvention::InputOutput),
            _ => None,
        }
    }
}

/// Optical pump/probe and mechanical drive settings.
///
/// Phases are in radians. The pump amplitude is real and positive; the pump
/// phase φ_l only enters through φ_pl = φ_p − φ_l and Φ_i = φ_i + φ_l − φ_p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveConfig {
    /// Pump power P_L, W.
    pub pump_power: f64,
    /// Pump angular frequency ω_l.
    pub omega_l: f64,
    /// Bare detuning Δ_c = ω_c − ω_l.
    pub delta_c: f64,
    pub eps_l: f64,
    pub eps_p: f64,
    pub phi_l: f64,
    pub phi_p: f64,
    /// Mechanical drive amplitudes ε_1, ε_2.
    pub eps_mech: [f64; 2],
    /// Mechanical drive phases φ_1, φ_2.
    pub phi_mech: [f64; 2],
    /// Probe-pump beat frequency ξ = ω_p − ω_l.
    pub xi: f64,
}

/// Drives above this fraction of ε_l trigger a perturbative-regime warning.
pub const PERTURBATIVE_FRACTION: f64 = 0.1;

pub(crate) fn wrap_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl DriveConfig {
    /// Pump-only configuration; the probe beat is parked at ξ = ω_{m,1} (Δ_p = 0).
    pub fn from_pump_power(
        sp: &SystemParams,
        pump_power: f64,
        delta_c: f64,
        convention: PumpConvention,
    ) -> Result<Self> {
        check_non_negative("pump_power", pump_power)?;
        if !delta_c.is_finite() {
            return Err(OmitError::param("delta_c", "must be finite"));
        }
        let omega_l = sp.omega_c - delta_c;
        check_positive("omega_l", omega_l)?;
        Ok(DriveConfig {
            pump_power,
            omega_l,
            delta_c,
            eps_l: convention.amplitude(sp, pump_power, omega_l),
            eps_p: 0.0,
            phi_l: 0.0,
            phi_p: 0.0,
            eps_mech: [0.0; 2],
            phi_mech: [0.0; 2],
            xi: sp.omega_m[0],
        })
    }

    /// Configuration from an explicit pump amplitude (no power bookkeeping).
    pub fn from_amplitude(sp: &SystemParams, eps_l: f64, delta_c: f64) -> Self {
        DriveConfig {
            pump_power: 0.0,
            omega_l: sp.omega_c - delta_c,
            delta_c,
            eps_l,
            eps_p: 0.0,
            phi_l: 0.0,
            phi_p: 0.0,
            eps_mech: [0.0; 2],
            phi_mech: [0.0; 2],
            xi: sp.omega_m[0],
        }
    }

    pub fn with_probe(mut self, eps_p: f64, phi_p: f64) -> Self {
        self.eps_p = eps_p;
        self.phi_p = phi_p;
        self
    }

    /// Mechanical drive on resonator `i` (0-based).
    pub fn with_mech_drive(mut self, i: usize, eps: f64, phi: f64) -> Self {
        self.eps_mech[i] = eps;
        self.phi_mech[i] = phi;
        self
    }

    pub fn with_xi(mut self, xi: f64) -> Self {
        self.xi = xi;
        self
    }

    /// Set ξ from the normalized probe detuning Δ_p / ω_{m,1} = (ξ − ω_{m,1}) / ω_{m,1}.
    pub fn with_probe_detuning_ratio(mut self, sp: &SystemParams, ratio: f64) -> Self {
        self.xi = sp.omega_m[0] * (1.0 + ratio);
        self
    }

    pub fn omega_p(&self) -> f64 {
        self.omega_l + self.xi
    }

    /// Δ_p = ξ − ω_{m,1}.
    pub fn delta_p(&self, sp: &SystemParams) -> f64 {
        self.xi - sp.omega_m[0]
    }

    /// φ_pl = φ_p − φ_l in [0, 2π).
    pub fn phi_pl(&self) -> f64 {
        wrap_phase(self.phi_p - self.phi_l)
    }

    /// Φ_i = φ_i + φ_l − φ_p in [0, 2π), for resonator `i` (0-based).
    pub fn mixing_phase(&self, i: usize) -> f64 {
        wrap_phase(self.phi_mech[i] + self.phi_l - self.phi_p)
    }

    /// Drives exceeding the perturbative threshold, as human-readable notes.
    pub fn perturbative_warnings(&self) -> Vec<String> {
        let limit = PERTURBATIVE_FRACTION * self.eps_l;
        let mut out = Vec::new();
        if self.eps_p > limit {
            out.push(format!("probe amplitude {:e} exceeds 0.1·eps_l", self.eps_p));
        }
        for (i, e) in self.eps_mech.iter().enumerate() {
            if *e > limit {
                out.push(format!("mechanical drive {} amplitude {:e} exceeds 0.1·eps_l", i + 1, e));
            }
        }
        out
    }
}

/// Convert an ordinary frequency (Hz) to angular frequency.
pub fn hz_to_angular(f: f64) -> f64 {
    2.0 * PI * f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_device() -> DeviceSpec {
        DeviceSpec {
            wavelength: 1064e-9,
            cavity_length: 25e-3,
            omega_m: [hz_to_angular(947e3); 2],
            mass: [145e-12; 2],
            damping: Damping::Quality(6700.0),
            kappa: hz_to_angular(215e3),
            eta_c: 0.5,
            lambda: hz_to_angular(0.1e6),
        }
    }

    #[test]
    fn damping_from_quality_factor() {
        let sp = derive_params(&reference_device()).unwrap();
        assert_eq!(sp.gamma[0], sp.omega_m[0] / 6700.0);
        let gamma_hz = sp.gamma[0] / TAU;
        assert!((gamma_hz - 141.34).abs() < 0.01, "{gamma_hz}");
    }

    #[test]
    fn zero_point_and_coupling() {
        let sp = derive_params(&reference_device()).unwrap();
        // independent arithmetic: ħ = 1.0546e-34, m = 1.45e-10 kg, ω = 5.9502e6
        let xzpf = (1.054_571_817e-34_f64 / (2.0 * 1.45e-10 * 5.950_176_485_9e6)).sqrt();
        assert!((sp.x_zpf(0) / xzpf - 1.0).abs() < 1e-9);
        assert!((sp.x_zpf(0) - 2.47e-16).abs() < 0.01e-16);
        let omega_c = 2.0 * std::f64::consts::PI * 299_792_458.0 / 1064e-9;
        assert!((sp.g - omega_c / 0.025 * xzpf).abs() / sp.g < 1e-9);
        assert!((sp.g - 17.5).abs() < 0.05, "g = {}", sp.g);
    }

    #[test]
    fn rejects_non_positive_inputs_by_name() {
        let mut raw = reference_device();
        raw.mass[1] = 0.0;
        match derive_params(&raw) {
            Err(OmitError::InvalidParameter { field, .. }) => assert_eq!(field, "mass2"),
            other => panic!("unexpected {other:?}"),
        }
        let mut raw = reference_device();
        raw.kappa = -1.0;
        assert!(matches!(derive_params(&raw), Err(OmitError::InvalidParameter { field, .. }) if field == "kappa"));
    }

    #[test]
    fn derive_is_bit_reproducible() {
        let a = derive_params(&reference_device()).unwrap();
        let b = derive_params(&reference_device()).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }

    fn reference_coulomb() -> CoulombParams {
        CoulombParams {
            k_e: COULOMB_CONSTANT,
            r0: 2e-3,
            capacitance: [27.5e-9; 2],
            voltage: [1.0; 2],
        }
    }

    #[test]
    fn coulomb_lambda_reference_geometry() {
        let sp = derive_params(&reference_device()).unwrap();
        let lam = coulomb_lambda(&reference_coulomb(), &sp).unwrap();
        // k_e q² / r0³ = 8.98755e9 · (27.5e-9)² / 8e-9 ≈ 849.6 N/m
        // sqrt(ħ / (m² ω²)) = sqrt(1.05457e-34) / (1.45e-10 · 5.95018e6) ≈ 1.1903e-14
        let expected = 849.64 * 1.1903e-14;
        assert!((lam / expected - 1.0).abs() < 1e-3, "{lam}");
        assert!((lam - 1.0e-11).abs() < 0.05e-11);
    }

    #[test]
    fn coulomb_scaling_laws() {
        let sp = derive_params(&reference_device()).unwrap();
        let base = coulomb_lambda(&reference_coulomb(), &sp).unwrap();
        let mut cp = reference_coulomb();
        cp.voltage[0] *= 2.0;
        assert!((coulomb_lambda(&cp, &sp).unwrap() / base - 2.0).abs() < 1e-12);
        let mut cp = reference_coulomb();
        cp.r0 *= 2.0;
        assert!((coulomb_lambda(&cp, &sp).unwrap() / base - 0.125).abs() < 1e-12);
        let mut sp2 = sp;
        sp2.mass[1] *= 4.0;
        assert!((coulomb_lambda(&reference_coulomb(), &sp2).unwrap() / base - 0.5).abs() < 1e-12);
    }

    #[test]
    fn coulomb_zero_separation_is_singular() {
        let sp = derive_params(&reference_device()).unwrap();
        let mut cp = reference_coulomb();
        cp.r0 = 0.0;
        assert!(matches!(coulomb_lambda(&cp, &sp), Err(OmitError::SingularGeometry(_))));
    }

    #[test]
    fn phases_are_wrapped() {
        let sp = derive_params(&reference_device()).unwrap();
        let dc = DriveConfig::from_amplitude(&sp, 1.0, sp.omega_m[0])
            .with_probe(0.1, 0.5)
            .with_mech_drive(0, 0.01, -7.0);
        let pl = dc.phi_pl();
        assert!((0.0..TAU).contains(&pl));
        assert!((pl - 0.5).abs() < 1e-15);
        let big = dc.mixing_phase(0);
        assert!((0.0..TAU).contains(&big));
        assert!((big - (-7.5f64).rem_euclid(TAU)).abs() < 1e-12);
    }

    #[test]
    fn perturbative_threshold_is_a_warning() {
        let sp = derive_params(&reference_device()).unwrap();
        let dc = DriveConfig::from_amplitude(&sp, 1.0, 0.0)
            .with_probe(0.2, 0.0)
            .with_mech_drive(1, 0.05, 0.0);
        assert_eq!(dc.perturbative_warnings().len(), 1);
    }

    #[test]
    fn pump_conventions_are_ordered() {
        let sp = derive_params(&reference_device()).unwrap();
        let two = PumpConvention::TwoKappa.amplitude(&sp, 3e-3, sp.omega_c);
        let eta = PumpConvention::EtaKappa.amplitude(&sp, 3e-3, sp.omega_c);
        let io = PumpConvention::InputOutput.amplitude(&sp, 3e-3, sp.omega_c);
        assert!((eta / two - sp.eta_c.sqrt()).abs() < 1e-14);
        assert!((io / eta - 0.5f64.sqrt()).abs() < 1e-14);
    }
}
