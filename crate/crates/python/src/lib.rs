//! Python bindings: device parameters, configuration, dressed states, CW
//! reflection and the time-gated protocols.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyDict};

use lambda_detector::config::RunConfig;
use lambda_detector::error::Error;
use lambda_detector::ladder;
use lambda_detector::params::{self, SystemParams};
use lambda_detector::protocols::{self, OperatingPoint, ReadoutModel, ResetConfig, SimSettings};
use lambda_detector::response;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidParameter { .. }
        | Error::InvalidCutoff(..)
        | Error::NotNested { .. }
        | Error::Config(_)
        | Error::EmptyGrid
        | Error::NonMonotoneGrid(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Device parameters in SI units (rad/s, s).
#[pyclass(name = "SystemParams", module = "lambda_detector", skip_from_py_object)]
#[derive(Clone)]
struct PySystemParams {
    inner: SystemParams,
}

#[pymethods]
impl PySystemParams {
    /// Bundled device values with the drive calibration anchored at -75.7 dBm.
    #[staticmethod]
    fn reference_device() -> Self {
        PySystemParams { inner: SystemParams::reference_device() }
    }

    #[getter]
    fn omega_ge(&self) -> f64 {
        self.inner.omega_ge
    }
    #[setter]
    fn set_omega_ge(&mut self, v: f64) {
        self.inner.omega_ge = v;
    }
    #[getter]
    fn omega_r(&self) -> f64 {
        self.inner.omega_r
    }
    #[setter]
    fn set_omega_r(&mut self, v: f64) {
        self.inner.omega_r = v;
    }
    #[getter]
    fn chi(&self) -> f64 {
        self.inner.chi
    }
    #[setter]
    fn set_chi(&mut self, v: f64) {
        self.inner.chi = v;
    }
    #[getter]
    fn kappa(&self) -> f64 {
        self.inner.kappa
    }
    #[setter]
    fn set_kappa(&mut self, v: f64) {
        self.inner.kappa = v;
    }
    #[getter]
    fn kappa_ext_ratio(&self) -> f64 {
        self.inner.kappa_ext_ratio
    }
    #[setter]
    fn set_kappa_ext_ratio(&mut self, v: f64) {
        self.inner.kappa_ext_ratio = v;
    }
    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma
    }
    #[setter]
    fn set_gamma(&mut self, v: f64) {
        self.inner.gamma = v;
    }
    #[getter]
    fn gamma_phi(&self) -> f64 {
        self.inner.gamma_phi
    }
    #[setter]
    fn set_gamma_phi(&mut self, v: f64) {
        self.inner.gamma_phi = v;
    }
    #[getter]
    fn init_excited_pop(&self) -> f64 {
        self.inner.init_excited_pop
    }
    #[setter]
    fn set_init_excited_pop(&mut self, v: f64) {
        self.inner.init_excited_pop = v;
    }
    #[getter]
    fn drive_power_to_rabi(&self) -> f64 {
        self.inner.drive_power_to_rabi
    }
    #[setter]
    fn set_drive_power_to_rabi(&mut self, v: f64) {
        self.inner.drive_power_to_rabi = v;
    }

    fn validate(&self) -> PyResult<()> {
        self.inner.validate().map_err(to_py)
    }

    fn rabi_from_dbm(&self, p_dbm: f64) -> f64 {
        self.inner.rabi_from_dbm(p_dbm)
    }

    fn dbm_from_rabi(&self, rabi: f64) -> f64 {
        self.inner.dbm_from_rabi(rabi)
    }

    fn check_nesting(&self, omega_d: f64) -> PyResult<()> {
        self.inner.check_nesting(omega_d).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// Parsed key-value configuration layered over the bundled defaults.
#[pyclass(name = "RunConfig", module = "lambda_detector")]
struct PyRunConfig {
    inner: RunConfig,
}

#[pymethods]
impl PyRunConfig {
    #[new]
    #[pyo3(signature = (text = ""))]
    fn new(text: &str) -> PyResult<Self> {
        RunConfig::parse(text).map(|inner| PyRunConfig { inner }).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn set(&mut self, key: &str, value: &str) -> PyResult<()> {
        self.inner.set(key, value).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Scalar value of a base key in SI units (dBm for powers).
    fn number(&self, key: &str) -> PyResult<f64> {
        self.inner.try_number(key).ok_or_else(|| PyValueError::new_err(format!("`{key}` is not a numeric key")))
    }

    fn params(&self) -> PyResult<PySystemParams> {
        self.inner.params().map(|inner| PySystemParams { inner }).map_err(to_py)
    }

    fn canonical(&self) -> String {
        self.inner.to_canonical_string()
    }
}

fn settings(n_max: usize) -> SimSettings {
    SimSettings { n_max, ..SimSettings::default() }
}

/// Dressed energies (rad/s), transition frequencies and Raman rates.
#[pyfunction]
fn dressed_states<'py>(py: Python<'py>, p: PyRef<'_, PySystemParams>, omega_d: f64, rabi: f64) -> PyResult<Bound<'py, PyDict>> {
    let l = ladder::dressed_states(&p.inner, omega_d, rabi).map_err(to_py)?;
    let r = ladder::raman_rates(&l, &p.inner);
    let d = PyDict::new(py);
    d.set_item("energies", l.energies.to_vec())?;
    for (name, (i, j)) in [("omega13", (1, 3)), ("omega14", (1, 4)), ("omega23", (2, 3)), ("omega24", (2, 4))] {
        d.set_item(name, ladder::transition_frequency(&l, i, j).map_err(to_py)?)?;
    }
    d.set_item("k31", r.k31)?;
    d.set_item("k32", r.k32)?;
    d.set_item("k41", r.k41)?;
    d.set_item("k42", r.k42)?;
    Ok(d)
}

/// Drive amplitude balancing the two decay rates of the upper dressed state.
#[pyfunction]
fn matching_amplitude(p: PyRef<'_, PySystemParams>, omega_d: f64) -> PyResult<f64> {
    ladder::matching_amplitude(&p.inner, omega_d).map_err(to_py)
}

/// Steady-state reflection coefficient of a weak CW probe.
#[pyfunction]
#[pyo3(signature = (p, omega_d, rabi, omega_s, probe_amp = response::DEFAULT_PROBE_AMP))]
fn reflection<'py>(
    py: Python<'py>,
    p: PyRef<'_, PySystemParams>,
    omega_d: f64,
    rabi: f64,
    omega_s: f64,
    probe_amp: f64,
) -> PyResult<Bound<'py, PyComplex>> {
    let r = response::reflection_coefficient(&p.inner, omega_d, rabi, omega_s, probe_amp).map_err(to_py)?;
    Ok(PyComplex::from_doubles(py, r.re, r.im))
}

/// One detection attempt; returns `P_e`, `P_dark`, `eta` and `click`.
#[pyfunction]
#[pyo3(signature = (p, omega_d, rabi, omega_s, t_s, n_s, eps_ge = 0.0, eps_eg = 0.0, n_max = 3))]
#[allow(clippy::too_many_arguments)]
fn detection_run<'py>(
    py: Python<'py>,
    p: PyRef<'_, PySystemParams>,
    omega_d: f64,
    rabi: f64,
    omega_s: f64,
    t_s: f64,
    n_s: f64,
    eps_ge: f64,
    eps_eg: f64,
    n_max: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let op = OperatingPoint { omega_d, rabi, omega_s };
    let readout = ReadoutModel { eps_ge, eps_eg };
    let o = protocols::detection_run(&p.inner, op, t_s, n_s, &readout, &settings(n_max)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("P_e", o.p_e)?;
    d.set_item("P_dark", o.p_dark)?;
    d.set_item("eta", o.eta)?;
    d.set_item("click", o.click)?;
    d.set_item("flagged", o.health.flagged())?;
    Ok(d)
}

/// Dark-count probability of the detection protocol.
#[pyfunction]
#[pyo3(signature = (p, omega_d, rabi, t_s, n_max = 3))]
fn dark_count(p: PyRef<'_, PySystemParams>, omega_d: f64, rabi: f64, t_s: f64, n_max: usize) -> PyResult<f64> {
    let op = OperatingPoint { omega_d, rabi, omega_s: p.inner.omega_r };
    protocols::dark_count(&p.inner, op, t_s, &settings(n_max)).map_err(to_py)
}

/// Reset of an excited qubit; returns residual `P_e` with and without the reset pulse.
#[pyfunction]
#[pyo3(signature = (p, omega_d, rabi, omega_rst, n_rst, initial_pi = true, n_max = 3))]
#[allow(clippy::too_many_arguments)]
fn reset_run(
    p: PyRef<'_, PySystemParams>,
    omega_d: f64,
    rabi: f64,
    omega_rst: f64,
    n_rst: f64,
    initial_pi: bool,
    n_max: usize,
) -> PyResult<(f64, f64)> {
    let cfg = ResetConfig { with_initial_pi: initial_pi, ..ResetConfig::new(omega_d, rabi, omega_rst, n_rst) };
    let o = protocols::reset_run(&p.inner, &cfg, &settings(n_max)).map_err(to_py)?;
    Ok((o.p_e_after_reset, o.p_e_no_reset))
}

/// Converts GHz to rad/s.
#[pyfunction]
fn ghz(f: f64) -> f64 {
    params::ghz(f)
}

/// Converts MHz to rad/s.
#[pyfunction]
fn mhz(f: f64) -> f64 {
    params::mhz(f)
}

/// Converts nanoseconds to seconds.
#[pyfunction]
fn ns(t: f64) -> f64 {
    params::ns(t)
}

#[pymodule]
fn lambda_detector_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystemParams>()?;
    m.add_class::<PyRunConfig>()?;
    m.add_function(wrap_pyfunction!(dressed_states, m)?)?;
    m.add_function(wrap_pyfunction!(matching_amplitude, m)?)?;
    m.add_function(wrap_pyfunction!(reflection, m)?)?;
    m.add_function(wrap_pyfunction!(detection_run, m)?)?;
    m.add_function(wrap_pyfunction!(dark_count, m)?)?;
    m.add_function(wrap_pyfunction!(reset_run, m)?)?;
    m.add_function(wrap_pyfunction!(ghz, m)?)?;
    m.add_function(wrap_pyfunction!(mhz, m)?)?;
    m.add_function(wrap_pyfunction!(ns, m)?)?;
    Ok(())
}
