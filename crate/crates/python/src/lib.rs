//! Python access to scenarios, operating points and scans.

use num_complex::Complex64;
use omit_core::config::Scenario as CoreScenario;
use omit_core::scan::{self, Axis, ScanKind, ScanSpec};
use omit_core::sideband;
use omit_core::stability::analyze;
use omit_core::timedomain::{run_oracle, OracleOptions};
use omit_core::{cubic, OmitError, OperatingPoint as CoreOp};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: OmitError) -> PyErr {
    if e.is_usage() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

/// Device, drive and mode settings in internal SI units.
#[pyclass(name = "Scenario", from_py_object)]
#[derive(Clone)]
struct Scenario {
    inner: CoreScenario,
}

#[pymethods]
impl Scenario {
    /// The built-in parameter set, optionally with extra `key = value` lines applied.
    #[new]
    #[pyo3(signature = (text = None))]
    fn new(text: Option<&str>) -> PyResult<Self> {
        let inner = match text {
            Some(t) => CoreScenario::from_str_over_reference(t).map_err(to_py)?,
            None => CoreScenario::reference(),
        };
        Ok(Scenario { inner })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        Ok(Scenario { inner: CoreScenario::from_file(std::path::Path::new(path)).map_err(to_py)? })
    }

    /// Set one key; numbers and strings are both accepted.
    fn set(&mut self, key: &str, value: &Bound<'_, PyAny>) -> PyResult<()> {
        let text = match value.extract::<f64>() {
            Ok(v) => format!("{v:?}"),
            Err(_) => value.str()?.to_string(),
        };
        self.inner.set(key, &text).map_err(to_py)
    }

    fn to_kv(&self) -> String {
        self.inner.to_kv()
    }

    fn operating_point(&self) -> PyResult<OperatingPoint> {
        Ok(OperatingPoint { inner: self.inner.operating_point().map_err(to_py)? })
    }

    fn __repr__(&self) -> String {
        format!("Scenario(pump_power_mw={}, branch={})", self.inner.pump_power * 1e3, self.inner.branch.name())
    }
}

/// Parameters, drive and steady state of one point.
#[pyclass(name = "OperatingPoint", frozen)]
struct OperatingPoint {
    inner: CoreOp,
}

#[pymethods]
impl OperatingPoint {
    #[getter]
    fn photon_number(&self) -> f64 {
        self.inner.ss.photon_number
    }

    #[getter]
    fn delta_eff(&self) -> f64 {
        self.inner.ss.delta_eff
    }

    #[getter]
    fn delta_c(&self) -> f64 {
        self.inner.dc.delta_c
    }

    #[getter]
    fn c_s(&self) -> Complex64 {
        self.inner.ss.c_s
    }

    #[getter]
    fn g_eff(&self) -> Complex64 {
        self.inner.ss.g_eff(&self.inner.sp)
    }

    #[getter]
    fn eps_l(&self) -> f64 {
        self.inner.dc.eps_l
    }

    #[getter]
    fn eps_p(&self) -> f64 {
        self.inner.dc.eps_p
    }

    #[getter]
    fn omega_m(&self) -> (f64, f64) {
        (self.inner.sp.omega_m[0], self.inner.sp.omega_m[1])
    }

    #[getter]
    fn kappa(&self) -> f64 {
        self.inner.sp.kappa
    }

    #[getter]
    fn lambda_(&self) -> f64 {
        self.inner.sp.lambda
    }

    #[getter]
    fn n_branches(&self) -> usize {
        self.inner.ss.n_branches
    }

    /// First- and second-order amplitudes, transmission and efficiency.
    fn sideband<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let op = &self.inner;
        let sol = sideband::solve(&op.sp, &op.ss, &op.dc).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("t", sol.transmission_t)?;
        d.set_item("t2", sol.t2())?;
        d.set_item("eta", sol.efficiency_eta)?;
        d.set_item("first", sol.first.as_array().to_vec())?;
        d.set_item("second", sol.second.as_array().to_vec())?;
        d.set_item("first_closed_form_discrepancy", sol.first.closed_form_discrepancy)?;
        d.set_item("second_closed_form_discrepancy", sol.second.closed_form_discrepancy)?;
        Ok(d)
    }

    /// Complex transmission at probe detuning Δ_p = ratio · ω_{m,1}.
    fn transmission(&self, delta_p_ratio: f64) -> PyResult<Complex64> {
        let op = &self.inner;
        let xi = op.sp.omega_m[0] * (1.0 + delta_p_ratio);
        sideband::transmission_at(&op.sp, &op.ss, &op.dc, xi).map_err(to_py)
    }

    /// Group delay in seconds at the configured probe detuning.
    fn group_delay(&self) -> PyResult<f64> {
        let op = &self.inner;
        Ok(sideband::group_delay(&op.sp, &op.ss, &op.dc).map_err(to_py)?.tau)
    }

    /// Complex drive ratio of exact on-resonance extinction (single resonator only).
    fn turning_point(&self) -> PyResult<Complex64> {
        let op = &self.inner;
        Ok(sideband::turning_point(&op.sp, &op.ss, op.sp.omega_m[0]).map_err(to_py)?.z)
    }

    fn stability<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let rep = analyze(&self.inner.sp, &self.inner.ss).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("stable", rep.stable)?;
        d.set_item("max_re_eig", rep.max_real_eigenvalue)?;
        d.set_item("hurwitz_minors", rep.rh.minors.to_vec())?;
        d.set_item("agreement", rep.method_agreement)?;
        d.set_item("eigenvalues", rep.eigenvalues.clone())?;
        Ok(d)
    }

    /// Time-domain integration compared with the sideband solution.
    #[pyo3(signature = (window_periods = 40, step_halving = false))]
    fn oracle<'py>(&self, py: Python<'py>, window_periods: usize, step_halving: bool) -> PyResult<Bound<'py, PyDict>> {
        let op = self.inner;
        let opts = OracleOptions { window_periods, step_halving, ..Default::default() };
        let r = py.detach(move || run_oracle(&op.sp, &op.ss, &op.dc, &opts)).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("a1m_time", r.a1m_time)?;
        d.set_item("a1m_freq", r.a1m_freq)?;
        d.set_item("a1m_rel_err", r.a1m_rel_err)?;
        d.set_item("a2m_time", r.a2m_time)?;
        d.set_item("a2m_freq", r.a2m_freq)?;
        d.set_item("a2m_rel_err", r.a2m_rel_err)?;
        d.set_item("leakage", r.harmonics.leakage_estimate)?;
        d.set_item("step_halving_rel", r.step_halving_rel)?;
        Ok(d)
    }
}

/// Run a scan and return `{columns, rows, status}`.
#[pyfunction]
#[pyo3(signature = (kind, scenario = None, axes = Vec::new(), workers = None))]
fn run_scan<'py>(
    py: Python<'py>,
    kind: &str,
    scenario: Option<Scenario>,
    axes: Vec<String>,
    workers: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let kind = ScanKind::parse(kind).ok_or_else(|| PyValueError::new_err(format!("unknown scan kind `{kind}`")))?;
    let base = scenario.map_or_else(CoreScenario::reference, |s| s.inner);
    let axes = axes.iter().map(|a| Axis::parse(a)).collect::<Result<Vec<_>, _>>().map_err(to_py)?;
    let spec = ScanSpec { workers, ..ScanSpec::new(kind, base).with_axes(axes) };
    let r = py.detach(|| scan::run_scan(&spec)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("columns", r.columns.clone())?;
    d.set_item("rows", r.rows.clone())?;
    d.set_item("status", r.status.iter().map(|s| s.name()).collect::<Vec<_>>())?;
    Ok(d)
}

/// Real roots of c3 x³ + c2 x² + c1 x + c0, ascending.
#[pyfunction]
fn cubic_real_roots(c0: f64, c1: f64, c2: f64, c3: f64) -> Vec<f64> {
    cubic::real_roots(&[c0, c1, c2, c3]).roots
}

#[pymodule]
fn omit_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Scenario>()?;
    m.add_class::<OperatingPoint>()?;
    m.add_function(wrap_pyfunction!(run_scan, m)?)?;
    m.add_function(wrap_pyfunction!(cubic_real_roots, m)?)?;
    m.add("SCAN_KINDS", scan::ALL_KINDS.iter().map(|k| k.name()).collect::<Vec<_>>())?;
    Ok(())
}
