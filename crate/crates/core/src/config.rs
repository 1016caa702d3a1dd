//! Key-value scenario files with explicit unit suffixes.
//!
//! ```text
//! omega_m1_hz = 947e3      # ordinary frequency, stored as 2π·947e3 rad/s
//! kappa_rad_s = 1.35e6     # already angular
//! phi1_rad    = pi/2
//! ```
//!
//! Hyphens in keys are accepted as underscores. Unknown keys are errors.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{OmitError, Result};
use crate::params::{
    coulomb_lambda, derive_params, CoulombParams, Damping, DeviceSpec, DriveConfig, PumpConvention, SystemParams,
    COULOMB_CONSTANT,
};
use crate::steady::{red_sideband_delta_c, solve_steady, BranchPolicy, SteadyState};

const REFERENCE_CONF: &str = include_str!("../../../configs/reference.conf");

/// How a directly entered λ was written.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaInput {
    /// Ordinary-frequency value in Hz (subject to `lambda_is_angular`).
    Hz(f64),
    RadS(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetuningSetting {
    /// Δ_c chosen so that Δ = ω_{m,1}.
    RedSideband,
    /// Δ_c = ratio · ω_{m,1}.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoulombInput {
    pub k_e: Option<f64>,
    pub r0: Option<f64>,
    pub capacitance: [Option<f64>; 2],
    pub voltage: [Option<f64>; 2],
}

impl CoulombInput {
    fn any(&self) -> bool {
        self.r0.is_some()
            || self.capacitance.iter().any(Option::is_some)
            || self.voltage.iter().any(Option::is_some)
    }

    pub fn resolve(&self) -> Result<CoulombParams> {
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| OmitError::param(name, "missing Coulomb geometry value"));
        Ok(CoulombParams {
            k_e: self.k_e.unwrap_or(COULOMB_CONSTANT),
            r0: need(self.r0, "coulomb_r0_mm")?,
            capacitance: [need(self.capacitance[0], "coulomb_c1_nf")?, need(self.capacitance[1], "coulomb_c2_nf")?],
            voltage: [need(self.voltage[0], "coulomb_v1_v")?, need(self.voltage[1], "coulomb_v2_v")?],
        })
    }
}

/// A fully specified operating scenario in internal SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub omega_m: [f64; 2],
    pub mass: [f64; 2],
    pub damping: Damping,
    pub kappa: f64,
    pub wavelength: f64,
    pub cavity_length: f64,
    pub eta_c: f64,
    pub g_override: Option<f64>,
    pub lambda: Option<LambdaInput>,
    pub lambda_is_angular: bool,
    pub coulomb: CoulombInput,
    /// W.
    pub pump_power: f64,
    pub pump_convention: PumpConvention,
    /// ε_p / ε_l.
    pub probe_fraction: f64,
    /// ε_i / ε_p.
    pub eps_ratio: [f64; 2],
    pub phi_l: f64,
    pub phi_p: f64,
    pub phi_mech: [f64; 2],
    /// Δ_p / ω_{m,1}.
    pub delta_p_ratio: f64,
    pub detuning: DetuningSetting,
    pub branch: BranchPolicy,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            omega_m: [0.0; 2],
            mass: [0.0; 2],
            damping: Damping::Quality(0.0),
            kappa: 0.0,
            wavelength: 0.0,
            cavity_length: 0.0,
            eta_c: 0.5,
            g_override: None,
            lambda: None,
            lambda_is_angular: false,
            coulomb: CoulombInput::default(),
            pump_power: 0.0,
            pump_convention: PumpConvention::default(),
            probe_fraction: 0.05,
            eps_ratio: [0.0; 2],
            phi_l: 0.0,
            phi_p: 0.0,
            phi_mech: [0.0; 2],
            delta_p_ratio: 0.0,
            detuning: DetuningSetting::RedSideband,
            branch: BranchPolicy::default(),
        }
    }
}

/// Parse a number, also accepting multiples of π such as `pi`, `-pi/2`, `3*pi/4`.
pub fn parse_number(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Some(v);
    }
    let pos = s.find("pi")?;
    let (head, tail) = (s[..pos].trim(), s[pos + 2..].trim());
    let factor = match head.trim_end_matches('*').trim() {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().ok()?,
    };
    let divisor = if tail.is_empty() {
        1.0
    } else {
        tail.strip_prefix('/')?.trim().parse::<f64>().ok()?
    };
    Some(factor * PI / divisor)
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.trim() {
        "true" | "yes" | "1" => Some(true),
        "false" | "no" | "0" => Some(false),
        _ => None,
    }
}

/// Canonical key spelling: lower case, underscores.
pub fn normalize_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

fn fmt_num(v: f64) -> String {
    // shortest representation that round-trips exactly
    format!("{v:?}")
}

impl Scenario {
    /// The checked-in reference parameter set.
    pub fn reference() -> Self {
        Scenario::default()
            .apply_str(REFERENCE_CONF)
            .expect("built-in parameter file parses")
    }

    /// Parse a config on top of the reference parameter set.
    pub fn from_str_over_reference(text: &str) -> Result<Self> {
        Scenario::reference().apply_str(text)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| OmitError::config(None, format!("cannot read {}: {e}", path.display())))?;
        Scenario::from_str_over_reference(&text)
    }

    /// Apply every `key = value` line of `text`.
    pub fn apply_str(mut self, text: &str) -> Result<Self> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| OmitError::config(Some(idx + 1), format!("expected `key = value`, got `{line}`")))?;
            self.set(k, v).map_err(|e| match e {
                OmitError::Config { line: None, msg } => OmitError::config(Some(idx + 1), msg),
                other => other,
            })?;
        }
        Ok(self)
    }

    /// Set one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = normalize_key(key);
        let value = value.trim();
        let num = || parse_number(value).ok_or_else(|| OmitError::config(None, format!("`{key}`: not a number: `{value}`")));
        let flag = || parse_bool(value).ok_or_else(|| OmitError::config(None, format!("`{key}`: not a boolean: `{value}`")));
        match key.as_str() {
            "omega_m1_hz" => self.omega_m[0] = TAU * num()?,
            "omega_m2_hz" => self.omega_m[1] = TAU * num()?,
            "omega_m_hz" => self.omega_m = [TAU * num()?; 2],
            "omega_m1_rad_s" => self.omega_m[0] = num()?,
            "omega_m2_rad_s" => self.omega_m[1] = num()?,
            "mass1_ng" => self.mass[0] = num()? * 1e-12,
            "mass2_ng" => self.mass[1] = num()? * 1e-12,
            "mass_ng" => self.mass = [num()? * 1e-12; 2],
            "quality_factor" => self.damping = Damping::Quality(num()?),
            "gamma1_hz" | "gamma1_rad_s" | "gamma2_hz" | "gamma2_rad_s" => {
                let v = if key.ends_with("_hz") { TAU * num()? } else { num()? };
                let mut rates = match self.damping {
                    Damping::Quality(q) => [self.omega_m[0] / q, self.omega_m[1] / q],
                    Damping::Rates(r) => r,
                };
                rates[if key.starts_with("gamma1") { 0 } else { 1 }] = v;
                self.damping = Damping::Rates(rates);
            }
            "kappa_hz" => self.kappa = TAU * num()?,
            "kappa_rad_s" => self.kappa = num()?,
            "wavelength_nm" => self.wavelength = num()? * 1e-9,
            "cavity_length_mm" => self.cavity_length = num()? * 1e-3,
            "eta_c" => self.eta_c = num()?,
            "g_rad_s" => self.g_override = if value == "auto" { None } else { Some(num()?) },
            "lambda_hz" => self.lambda = Some(LambdaInput::Hz(num()?)),
            "lambda_mhz" => self.lambda = Some(LambdaInput::Hz(num()? * 1e6)),
            "lambda_rad_s" => self.lambda = Some(LambdaInput::RadS(num()?)),
            "lambda_is_angular" => self.lambda_is_angular = flag()?,
            "lambda_source" => match value {
                "coulomb" => self.lambda = None,
                other => return Err(OmitError::config(None, format!("`lambda_source`: unknown value `{other}`"))),
            },
            "coulomb_ke" => self.coulomb.k_e = Some(num()?),
            "coulomb_r0_mm" => self.coulomb.r0 = Some(num()? * 1e-3),
            "coulomb_c1_nf" => self.coulomb.capacitance[0] = Some(num()? * 1e-9),
            "coulomb_c2_nf" => self.coulomb.capacitance[1] = Some(num()? * 1e-9),
            "coulomb_v1_v" => self.coulomb.voltage[0] = Some(num()?),
            "coulomb_v2_v" => self.coulomb.voltage[1] = Some(num()?),
            "pump_power_mw" => self.pump_power = num()? * 1e-3,
            "pump_convention" => {
                self.pump_convention = PumpConvention::parse(value).ok_or_else(|| {
                    OmitError::config(None, format!("`pump_convention`: expected 2kappa | eta-kappa | input-output, got `{value}`"))
                })?
            }
            "probe_fraction" => self.probe_fraction = num()?,
            "eps1_ratio" => self.eps_ratio[0] = num()?,
            "eps2_ratio" => self.eps_ratio[1] = num()?,
            "phi_l_rad" => self.phi_l = num()?,
            "phi_p_rad" => self.phi_p = num()?,
            "phi1_rad" => self.phi_mech[0] = num()?,
            "phi2_rad" => self.phi_mech[1] = num()?,
            "delta_p_ratio" => self.delta_p_ratio = num()?,
            "detuning_mode" => match value {
                "red-sideband" => self.detuning = DetuningSetting::RedSideband,
                "fixed-delta-c" => {
                    if self.detuning == DetuningSetting::RedSideband {
                        self.detuning = DetuningSetting::Fixed(1.0);
                    }
                }
                other => {
                    return Err(OmitError::config(
                        None,
                        format!("`detuning_mode`: expected red-sideband | fixed-delta-c, got `{other}`"),
                    ))
                }
            },
            "delta_c_ratio" => self.detuning = DetuningSetting::Fixed(num()?),
            "branch" => {
                self.branch = BranchPolicy::parse(value).ok_or_else(|| {
                    OmitError::config(None, format!("`branch`: expected adiabatic-lower | lower | middle | upper, got `{value}`"))
                })?
            }
            _ => return Err(OmitError::config(None, format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Set a numeric key (scan axes go through here).
    pub fn set_number(&mut self, key: &str, value: f64) -> Result<()> {
        self.set(key, &fmt_num(value))
    }

    /// Re-emit as a config file using ordinary-frequency keys.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("omega_m1_hz", fmt_num(self.omega_m[0] / TAU));
        kv("omega_m2_hz", fmt_num(self.omega_m[1] / TAU));
        kv("mass1_ng", fmt_num(self.mass[0] / 1e-12));
        kv("mass2_ng", fmt_num(self.mass[1] / 1e-12));
        match self.damping {
            Damping::Quality(q) => kv("quality_factor", fmt_num(q)),
            Damping::Rates(r) => {
                kv("gamma1_hz", fmt_num(r[0] / TAU));
                kv("gamma2_hz", fmt_num(r[1] / TAU));
            }
        }
        kv("kappa_hz", fmt_num(self.kappa / TAU));
        kv("wavelength_nm", fmt_num(self.wavelength / 1e-9));
        kv("cavity_length_mm", fmt_num(self.cavity_length / 1e-3));
        kv("eta_c", fmt_num(self.eta_c));
        if let Some(g) = self.g_override {
            kv("g_rad_s", fmt_num(g));
        }
        match self.lambda {
            Some(LambdaInput::Hz(v)) => kv("lambda_hz", fmt_num(v)),
            Some(LambdaInput::RadS(v)) => kv("lambda_rad_s", fmt_num(v)),
            None => kv("lambda_source", "coulomb".into()),
        }
        kv("lambda_is_angular", self.lambda_is_angular.to_string());
        let c = &self.coulomb;
        if let Some(v) = c.k_e {
            kv("coulomb_ke", fmt_num(v));
        }
        let opt = |v: Option<f64>, scale: f64| v.map(|x| fmt_num(x / scale));
        for (k, v) in [
            ("coulomb_r0_mm", opt(c.r0, 1e-3)),
            ("coulomb_c1_nf", opt(c.capacitance[0], 1e-9)),
            ("coulomb_c2_nf", opt(c.capacitance[1], 1e-9)),
            ("coulomb_v1_v", opt(c.voltage[0], 1.0)),
            ("coulomb_v2_v", opt(c.voltage[1], 1.0)),
        ] {
            if let Some(v) = v {
                kv(k, v);
            }
        }
        kv("pump_power_mw", fmt_num(self.pump_power / 1e-3));
        kv("pump_convention", self.pump_convention.name().into());
        kv("probe_fraction", fmt_num(self.probe_fraction));
        kv("eps1_ratio", fmt_num(self.eps_ratio[0]));
        kv("eps2_ratio", fmt_num(self.eps_ratio[1]));
        kv("phi_l_rad", fmt_num(self.phi_l));
        kv("phi_p_rad", fmt_num(self.phi_p));
        kv("phi1_rad", fmt_num(self.phi_mech[0]));
        kv("phi2_rad", fmt_num(self.phi_mech[1]));
        kv("delta_p_ratio", fmt_num(self.delta_p_ratio));
        match self.detuning {
            DetuningSetting::RedSideband => kv("detuning_mode", "red-sideband".into()),
            DetuningSetting::Fixed(r) => {
                kv("detuning_mode", "fixed-delta-c".into());
                kv("delta_c_ratio", fmt_num(r));
            }
        }
        kv("branch", self.branch.name().into());
        out
    }

    /// Resolved (key, value) pairs, for metadata blocks.
    pub fn resolved_pairs(&self) -> Vec<(String, String)> {
        self.to_kv()
            .lines()
            .filter_map(|l| l.split_once(" = ").map(|(k, v)| (k.to_string(), v.to_string())))
            .collect()
    }

    fn device_spec(&self, lambda: f64) -> DeviceSpec {
        DeviceSpec {
            wavelength: self.wavelength,
            cavity_length: self.cavity_length,
            omega_m: self.omega_m,
            mass: self.mass,
            damping: self.damping,
            kappa: self.kappa,
            eta_c: self.eta_c,
            lambda,
        }
    }

    /// The λ value that enters the dynamics, in rad/s.
    pub fn lambda_rad_s(&self) -> Result<f64> {
        let direct = self.lambda.map(|l| match l {
            LambdaInput::Hz(v) if self.lambda_is_angular => v,
            LambdaInput::Hz(v) => TAU * v,
            LambdaInput::RadS(v) => v,
        });
        match direct {
            Some(v) => {
                if self.coulomb.any() {
                    log::debug!("both a direct lambda and Coulomb geometry are set; using the direct value");
                }
                Ok(v)
            }
            None => {
                let sp = derive_params(&self.device_spec(0.0))?;
                coulomb_lambda(&self.coulomb.resolve()?, &sp)
            }
        }
    }

    /// λ from the Coulomb geometry alone.
    pub fn coulomb_lambda(&self) -> Result<f64> {
        let sp = derive_params(&self.device_spec(0.0))?;
        coulomb_lambda(&self.coulomb.resolve()?, &sp)
    }

    pub fn system_params(&self) -> Result<SystemParams> {
        let mut sp = derive_params(&self.device_spec(self.lambda_rad_s()?))?;
        if let Some(g) = self.g_override {
            sp.g = g;
        }
        sp.validate()?;
        Ok(sp)
    }

    /// Drive configuration, including the detuning policy and the probe beat.
    pub fn drive(&self, sp: &SystemParams) -> Result<DriveConfig> {
        for (name, v) in [("probe_fraction", self.probe_fraction), ("eps1_ratio", self.eps_ratio[0]), ("eps2_ratio", self.eps_ratio[1])] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(OmitError::param(name, format!("must be non-negative and finite, got {v}")));
            }
        }
        let base = DriveConfig::from_pump_power(sp, self.pump_power, 0.0, self.pump_convention)?;
        let delta_c = match self.detuning {
            DetuningSetting::RedSideband => red_sideband_delta_c(sp, base.eps_l),
            DetuningSetting::Fixed(r) => r * sp.omega_m[0],
        };
        let dc = DriveConfig::from_pump_power(sp, self.pump_power, delta_c, self.pump_convention)?;
        let eps_p = self.probe_fraction * dc.eps_l;
        let mut dc = dc
            .with_probe(eps_p, self.phi_p)
            .with_mech_drive(0, self.eps_ratio[0] * eps_p, self.phi_mech[0])
            .with_mech_drive(1, self.eps_ratio[1] * eps_p, self.phi_mech[1])
            .with_probe_detuning_ratio(sp, self.delta_p_ratio);
        dc.phi_l = self.phi_l;
        for w in dc.perturbative_warnings() {
            log::warn!("{w}");
        }
        Ok(dc)
    }

    pub fn operating_point(&self) -> Result<OperatingPoint> {
        let sp = self.system_params()?;
        let dc = self.drive(&sp)?;
        let ss = solve_steady(&sp, &dc, self.branch)?;
        Ok(OperatingPoint { sp, dc, ss })
    }
}

/// Parameters, drives and steady state of one evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub sp: SystemParams,
    pub dc: DriveConfig,
    pub ss: SteadyState,
}
