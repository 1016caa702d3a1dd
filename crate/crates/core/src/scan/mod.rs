//! Parameter sweeps over scenario keys, evaluated in parallel with a
//! deterministic row order.

mod emit;
mod kinds;

pub use emit::{parse_csv, write_csv, write_json, Metadata};
pub use kinds::evaluate_point;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{normalize_key, Scenario};
use crate::error::{OmitError, Result};

/// Largest number of points a single scan may request.
pub const MAX_POINTS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanKind {
    /// Probe transmission against probe detuning.
    Spectrum,
    /// On-resonance transmission against mechanical drive strength.
    Amplitude,
    /// Transmission over detuning and drive phase.
    PhaseMap,
    /// Group delay against pump power.
    DelayVsPower,
    /// Second-order sideband efficiency.
    Sideband2,
    /// Photon-number branches against pump power.
    Bistability,
    /// Stability of every branch over a parameter plane.
    StabilityMap,
    /// Phonon coupling from the electrostatic geometry.
    Coulomb,
}

pub const ALL_KINDS: [ScanKind; 8] = [
    ScanKind::Spectrum,
    ScanKind::Amplitude,
    ScanKind::PhaseMap,
    ScanKind::DelayVsPower,
    ScanKind::Sideband2,
    ScanKind::Bistability,
    ScanKind::StabilityMap,
    ScanKind::Coulomb,
];

impl ScanKind {
    pub fn name(self) -> &'static str {
        match self {
            ScanKind::Spectrum => "spectrum",
            ScanKind::Amplitude => "amplitude",
            ScanKind::PhaseMap => "phase-map",
            ScanKind::DelayVsPower => "delay-vs-power",
            ScanKind::Sideband2 => "sideband2",
            ScanKind::Bistability => "bistability",
            ScanKind::StabilityMap => "stability-map",
            ScanKind::Coulomb => "coulomb",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        ALL_KINDS.into_iter().find(|k| k.name() == s)
    }

    /// Axes used when none are given.
    pub fn default_axes(self) -> Vec<Axis> {
        let lin = |key: &str, start, stop, count| Axis { key: key.into(), start, stop, count, scale: AxisScale::Linear };
        match self {
            ScanKind::Spectrum | ScanKind::Sideband2 => vec![lin("delta_p_ratio", -0.4, 0.4, 801)],
            ScanKind::Amplitude => vec![lin("eps1_ratio", 0.0, 1.0, 201)],
            ScanKind::PhaseMap => vec![
                lin("delta_p_ratio", -0.4, 0.4, 161),
                lin("phi1_rad", 0.0, std::f64::consts::TAU, 73),
            ],
            ScanKind::DelayVsPower => vec![lin("pump_power_mw", 0.1, 7.0, 70)],
            ScanKind::Bistability => vec![lin("pump_power_mw", 0.0, 40.0, 401)],
            ScanKind::StabilityMap => vec![lin("pump_power_mw", 0.5, 40.0, 80), lin("delta_c_ratio", 0.5, 1.5, 41)],
            ScanKind::Coulomb => vec![Axis {
                key: "coulomb_v1_v".into(),
                start: 0.1,
                stop: 10.0,
                count: 41,
                scale: AxisScale::Log,
            }],
        }
    }

    /// Names of the computed columns (after the axis columns, before `status`).
    pub fn output_columns(self) -> &'static [&'static str] {
        match self {
            ScanKind::Spectrum | ScanKind::Amplitude => &["t2", "arg_t", "re_t", "im_t"],
            ScanKind::PhaseMap => &["Phi1", "t2", "arg_t"],
            ScanKind::DelayVsPower => &["delta_c", "tau_s", "tau_err_s", "t2"],
            ScanKind::Sideband2 => &["eta", "t2"],
            ScanKind::Bistability => &["delta_c", "x_lower", "x_middle", "x_upper", "n_branches", "fold"],
            ScanKind::StabilityMap => &[
                "delta_c",
                "n_branches",
                "stable_lower",
                "max_re_lower",
                "stable_middle",
                "max_re_middle",
                "stable_upper",
                "max_re_upper",
            ],
            ScanKind::Coulomb => &["lambda_rad_s", "lambda_over_omega_m"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisScale {
    Linear,
    Log,
}

/// One swept scenario key.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub key: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub scale: AxisScale,
}

impl Axis {
    /// Parse `key=start:stop:count[:lin|log]`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |why: &str| OmitError::Scan(format!("axis `{s}`: {why} (expected key=start:stop:count[:lin|log])"));
        let (key, range) = s.split_once('=').ok_or_else(|| bad("missing `=`"))?;
        let parts: Vec<&str> = range.split(':').map(str::trim).collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad("wrong number of fields"));
        }
        let num = |v: &str| crate::config::parse_number(v).ok_or_else(|| bad("not a number"));
        let count = parts[2].parse::<usize>().map_err(|_| bad("count is not an integer"))?;
        let scale = match parts.get(3).copied() {
            None | Some("lin") | Some("linear") => AxisScale::Linear,
            Some("log") => AxisScale::Log,
            Some(_) => return Err(bad("unknown scale")),
        };
        Ok(Axis { key: normalize_key(key), start: num(parts[0])?, stop: num(parts[1])?, count, scale })
    }

    fn validate(&self, base: &Scenario) -> Result<()> {
        if self.count < 2 {
            return Err(OmitError::Scan(format!("axis `{}`: count must be at least 2, got {}", self.key, self.count)));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(OmitError::Scan(format!("axis `{}`: bounds must be finite", self.key)));
        }
        if self.scale == AxisScale::Log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(OmitError::Scan(format!("axis `{}`: log scale needs positive bounds", self.key)));
        }
        let mut probe = base.clone();
        probe.set_number(&self.key, self.start).map_err(|e| match e {
            OmitError::Config { msg, .. } => OmitError::Scan(format!("axis `{}`: {msg}", self.key)),
            other => other,
        })
    }

    pub fn value(&self, i: usize) -> f64 {
        let f = i as f64 / (self.count - 1) as f64;
        if i == self.count - 1 {
            return self.stop;
        }
        match self.scale {
            AxisScale::Linear => self.start + (self.stop - self.start) * f,
            AxisScale::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * f).exp(),
        }
    }
}

/// A complete scan request.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub kind: ScanKind,
    /// Scenario with every fixed override already applied.
    pub base: Scenario,
    pub axes: Vec<Axis>,
    /// Worker threads; `None` uses the rayon default.
    pub workers: Option<usize>,
    /// Evaluate only this grid index (one entry per axis).
    pub point: Option<Vec<usize>>,
}

impl ScanSpec {
    pub fn new(kind: ScanKind, base: Scenario) -> Self {
        ScanSpec { kind, axes: kind.default_axes(), base, workers: None, point: None }
    }

    pub fn with_axes(mut self, axes: Vec<Axis>) -> Self {
        if !axes.is_empty() {
            self.axes = axes;
        }
        self
    }

    pub fn n_points(&self) -> usize {
        self.axes.iter().map(|a| a.count).fold(1usize, |p, c| p.saturating_mul(c))
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(OmitError::Scan(format!("a scan takes 1 or 2 axes, got {}", self.axes.len())));
        }
        if self.axes.len() == 2 && self.axes[0].key == self.axes[1].key {
            return Err(OmitError::Scan(format!("axis `{}` given twice", self.axes[0].key)));
        }
        for a in &self.axes {
            a.validate(&self.base)?;
        }
        let n = self.n_points();
        if n > MAX_POINTS {
            return Err(OmitError::Scan(format!("{n} points exceed the limit of {MAX_POINTS}")));
        }
        if let Some(p) = &self.point {
            if p.len() != self.axes.len() {
                return Err(OmitError::Scan(format!("--point needs {} indices", self.axes.len())));
            }
            for (i, a) in p.iter().zip(&self.axes) {
                if *i >= a.count {
                    return Err(OmitError::Scan(format!("point index {i} out of range for axis `{}`", a.key)));
                }
            }
        }
        if self.workers == Some(0) {
            return Err(OmitError::Scan("--workers must be at least 1".into()));
        }
        Ok(())
    }

    /// Grid indices of every row, first axis varying slowest.
    fn indices(&self) -> Vec<Vec<usize>> {
        if let Some(p) = &self.point {
            return vec![p.clone()];
        }
        let mut out = vec![vec![]];
        for a in &self.axes {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..a.count).map(move |i| {
                        let mut v = prefix.clone();
                        v.push(i);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// The scenario of one grid point.
    pub fn scenario_at(&self, idx: &[usize]) -> Result<Scenario> {
        let mut s = self.base.clone();
        for (a, i) in self.axes.iter().zip(idx) {
            s.set_number(&a.key, a.value(*i))?;
        }
        Ok(s)
    }

    pub fn columns(&self) -> Vec<String> {
        self.axes
            .iter()
            .map(|a| a.key.clone())
            .chain(self.kind.output_columns().iter().map(|c| c.to_string()))
            .collect()
    }
}

/// Outcome flag of one row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    /// A sideband linear system was singular.
    Singular,
    /// The selected steady state is dynamically unstable; values are still computed.
    UnstableBranch,
    /// The requested branch does not exist at this point.
    NoBranch,
    /// A residual check failed, an observable was undefined, or a value was not finite.
    Nonfinite,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Singular => "singular",
            Status::UnstableBranch => "unstable-branch",
            Status::NoBranch => "no-branch",
            Status::Nonfinite => "nonfinite",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Status::Ok, Status::Singular, Status::UnstableBranch, Status::NoBranch, Status::Nonfinite]
            .into_iter()
            .find(|v| v.name() == s)
    }
}

/// Row-major table with one status per row.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub kind: ScanKind,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub status: Vec<Status>,
    pub metadata: Metadata,
}

impl ScanResult {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }
}

fn evaluate_row(spec: &ScanSpec, idx: &[usize]) -> Result<(Vec<f64>, Status)> {
    let s = spec.scenario_at(idx)?;
    let mut row: Vec<f64> = spec.axes.iter().zip(idx).map(|(a, i)| a.value(*i)).collect();
    let (values, status) = evaluate_point(spec.kind, &s)?;
    row.extend(values);
    Ok((row, status))
}

pub fn run_scan(spec: &ScanSpec) -> Result<ScanResult> {
    spec.validate()?;
    let indices = spec.indices();
    let work = || -> Vec<Result<(Vec<f64>, Status)>> { indices.par_iter().map(|idx| evaluate_row(spec, idx)).collect() };
    let evaluated = match spec.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| OmitError::Scan(format!("cannot start {n} workers: {e}")))?
            .install(work),
        None => work(),
    };
    let mut rows = Vec::with_capacity(evaluated.len());
    let mut status = Vec::with_capacity(evaluated.len());
    for r in evaluated {
        let (row, st) = r?;
        rows.push(row);
        status.push(st);
    }
    Ok(ScanResult { kind: spec.kind, columns: spec.columns(), rows, status, metadata: Metadata::new(spec)? })
}
