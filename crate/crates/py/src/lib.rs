//! Python module `slepian`.
//!
//! Distribution functions take plain floats and an optional `QuadratureSpec`;
//! simulations take an `McSpec` and release the GIL while running.

use pyo3::exceptions::{PyArithmeticError, PyMemoryError, PyOverflowError, PyValueError};
use pyo3::prelude::*;

use slepian_core as core;
use slepian_core::Error;

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Domain(_) | Error::EmptyInput => PyValueError::new_err(msg),
        Error::Overflow { .. } => PyOverflowError::new_err(msg),
        Error::Resource { .. } => PyMemoryError::new_err(msg),
        Error::NonConvergence { .. } | Error::NonFiniteIntegrand { .. } => PyArithmeticError::new_err(msg),
    }
}

#[pyclass(name = "QuadratureSpec", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyQuadratureSpec {
    inner: core::QuadratureSpec,
}

#[pymethods]
impl PyQuadratureSpec {
    #[new]
    #[pyo3(signature = (abs_tol=1e-10, rel_tol=1e-9, max_depth=40, trunc_radius=12.0))]
    fn new(abs_tol: f64, rel_tol: f64, max_depth: u32, trunc_radius: f64) -> PyResult<Self> {
        let inner = core::QuadratureSpec { abs_tol, rel_tol, max_depth, trunc_radius };
        inner.validate().map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn abs_tol(&self) -> f64 {
        self.inner.abs_tol
    }
    #[getter]
    fn rel_tol(&self) -> f64 {
        self.inner.rel_tol
    }
    #[getter]
    fn max_depth(&self) -> u32 {
        self.inner.max_depth
    }
    #[getter]
    fn trunc_radius(&self) -> f64 {
        self.inner.trunc_radius
    }

    fn __repr__(&self) -> String {
        let q = self.inner;
        format!(
            "QuadratureSpec(abs_tol={:e}, rel_tol={:e}, max_depth={}, trunc_radius={})",
            q.abs_tol, q.rel_tol, q.max_depth, q.trunc_radius
        )
    }
}

fn quad(spec: Option<PyQuadratureSpec>) -> core::QuadratureSpec {
    spec.map_or_else(core::QuadratureSpec::default, |s| s.inner)
}

#[pyclass(name = "McSpec", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyMcSpec {
    inner: core::McSpec,
}

#[pymethods]
impl PyMcSpec {
    /// `sampling` is "grid" (grid points only) or "exact" (also sample the
    /// maximum inside each grid interval).
    #[new]
    #[pyo3(signature = (paths=1_000_000, grid_step=1e-4, master_seed=42, workers=None, sampling="grid"))]
    fn new(paths: usize, grid_step: f64, master_seed: u64, workers: Option<usize>, sampling: &str) -> PyResult<Self> {
        let sampling = match sampling {
            "grid" => core::MaxSampling::Grid,
            "exact" => core::MaxSampling::BridgeExact,
            other => return Err(PyValueError::new_err(format!("sampling must be 'grid' or 'exact', got {other:?}"))),
        };
        let base = core::McSpec::default();
        let inner = core::McSpec {
            paths,
            grid_step,
            master_seed,
            workers: workers.unwrap_or(base.workers),
            sampling,
            ..base
        };
        inner.validate().map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn paths(&self) -> usize {
        self.inner.paths
    }
    #[getter]
    fn grid_step(&self) -> f64 {
        self.inner.grid_step
    }
    #[getter]
    fn master_seed(&self) -> u64 {
        self.inner.master_seed
    }
    #[getter]
    fn workers(&self) -> usize {
        self.inner.workers
    }
    #[getter]
    fn sampling(&self) -> &'static str {
        match self.inner.sampling {
            core::MaxSampling::Grid => "grid",
            core::MaxSampling::BridgeExact => "exact",
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "McSpec(paths={}, grid_step={:e}, master_seed={}, workers={}, sampling={:?})",
            self.inner.paths,
            self.inner.grid_step,
            self.inner.master_seed,
            self.inner.workers,
            self.sampling()
        )
    }
}

#[pyclass(name = "McEstimate", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyMcEstimate {
    #[pyo3(get)]
    estimate: f64,
    #[pyo3(get)]
    std_error: f64,
    #[pyo3(get)]
    paths_used: usize,
}

impl From<core::McEstimate> for PyMcEstimate {
    fn from(e: core::McEstimate) -> Self {
        Self { estimate: e.estimate, std_error: e.std_error, paths_used: e.paths_used }
    }
}

#[pymethods]
impl PyMcEstimate {
    fn __repr__(&self) -> String {
        format!("McEstimate(estimate={}, std_error={}, paths_used={})", self.estimate, self.std_error, self.paths_used)
    }
}

/// Running maxima from one simulation: `column(s)` gives `m_s` for every path.
#[pyclass(name = "RunningMaxSamples", frozen, skip_from_py_object)]
struct PyRunningMaxSamples {
    inner: core::montecarlo::RunningMaxSamples,
}

#[pymethods]
impl PyRunningMaxSamples {
    #[getter]
    fn horizons(&self) -> Vec<f64> {
        self.inner.horizons().to_vec()
    }

    #[getter]
    fn paths(&self) -> usize {
        self.inner.paths()
    }

    fn column(&self, s: f64) -> PyResult<Vec<f64>> {
        self.inner.column(s).map_err(to_py)
    }

    /// `P(m_s ≤ m, M_t ≤ M)` estimated from these paths.
    #[pyo3(signature = (m, big_m, s, t))]
    fn joint_cdf(&self, m: f64, big_m: f64, s: f64, t: f64) -> PyResult<PyMcEstimate> {
        let pairs = self.inner.pairs(s, t).map_err(to_py)?;
        core::montecarlo::empirical_joint_cdf(&pairs, m, big_m).map(Into::into).map_err(to_py)
    }
}

#[pyfunction]
fn std_normal_pdf(x: f64) -> f64 {
    core::special::std_normal_pdf(x)
}

#[pyfunction]
fn std_normal_cdf(x: f64) -> f64 {
    core::special::std_normal_cdf(x)
}

#[pyfunction]
fn exp_mul_cdf(z: f64, w: f64) -> PyResult<f64> {
    core::special::exp_mul_cdf(z, w).map_err(to_py)
}

#[pyfunction]
fn warp(s: f64) -> PyResult<f64> {
    core::timewarp::warp(s).map_err(to_py)
}

#[pyfunction]
fn unwarp(sbar: f64) -> f64 {
    core::timewarp::unwarp(sbar)
}

#[pyfunction]
#[pyo3(name = "bl_finite")]
fn bl_finite(a: f64, b: f64, horizon: f64) -> PyResult<f64> {
    core::bachelier::bl_finite(a, b, horizon).map_err(to_py)
}

#[pyfunction]
fn bl_infinite(a: f64, b: f64) -> PyResult<f64> {
    core::bachelier::bl_infinite(a, b).map_err(to_py)
}

#[pyfunction]
fn bridge_noncross(a: f64, b: f64, sbar: f64, y: f64) -> PyResult<f64> {
    core::bachelier::bridge_noncross(a, b, sbar, y).map_err(to_py)
}

#[pyfunction]
fn segment_noncross(c: f64, d: f64, sbar: f64, horizon: f64, y: f64) -> PyResult<f64> {
    core::bachelier::segment_noncross(c, d, sbar, horizon, y).map_err(to_py)
}

/// `P(m_s ≤ m)`.
#[pyfunction]
#[pyo3(signature = (m, s, spec=None))]
fn running_max_cdf(m: f64, s: f64, spec: Option<PyQuadratureSpec>) -> PyResult<f64> {
    let q = core::MarginalQuery::new(m, s).map_err(to_py)?;
    core::running_max_cdf(q, &quad(spec)).map_err(to_py)
}

#[pyfunction]
fn running_max_pdf(m: f64, s: f64) -> PyResult<f64> {
    let q = core::MarginalQuery::new(m, s).map_err(to_py)?;
    core::running_max_pdf(q).map_err(to_py)
}

#[pyfunction]
fn global_max_cdf(big_m: f64) -> f64 {
    core::global_max_cdf(big_m)
}

#[pyfunction]
fn prob_nonpositive(s: f64) -> PyResult<f64> {
    core::prob_nonpositive(s).map_err(to_py)
}

/// `P(m_s ≤ m, M_t ≤ M)` for `0 ≤ s ≤ t ≤ 1`.
#[pyfunction]
#[pyo3(signature = (m, big_m, s, t, spec=None))]
fn joint_cdf(py: Python<'_>, m: f64, big_m: f64, s: f64, t: f64, spec: Option<PyQuadratureSpec>) -> PyResult<f64> {
    let q = core::JointQuery::new(m, big_m, s, t).map_err(to_py)?;
    let spec = quad(spec);
    py.detach(|| core::joint_cdf(q, &spec)).map_err(to_py)
}

#[pyfunction]
fn mean(s: f64) -> PyResult<f64> {
    core::moments::mean(s).map_err(to_py)
}

#[pyfunction]
fn second_moment(s: f64) -> PyResult<f64> {
    core::moments::second_moment(s).map_err(to_py)
}

#[pyfunction]
fn second_moment_uncorrected(s: f64) -> PyResult<f64> {
    core::moments::second_moment_uncorrected(s).map_err(to_py)
}

#[pyfunction]
fn variance(s: f64) -> PyResult<f64> {
    core::moments::variance(s).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (theta, s, spec=None))]
fn mgf(theta: f64, s: f64, spec: Option<PyQuadratureSpec>) -> PyResult<f64> {
    core::moments::mgf(theta, s, &quad(spec)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (k, s, spec=None))]
fn moment_k(k: u32, s: f64, spec: Option<PyQuadratureSpec>) -> PyResult<f64> {
    core::moments::moment_k(k, s, &quad(spec)).map_err(to_py)
}

#[pyfunction]
fn simulate_running_max(py: Python<'_>, spec: PyMcSpec, s_list: Vec<f64>, t_max: f64) -> PyResult<PyRunningMaxSamples> {
    let inner = py
        .detach(|| core::montecarlo::simulate_running_max(&spec.inner, &s_list, t_max))
        .map_err(to_py)?;
    Ok(PyRunningMaxSamples { inner })
}

#[pyfunction]
fn empirical_cdf(samples: Vec<f64>, level: f64) -> PyResult<PyMcEstimate> {
    core::montecarlo::empirical_cdf(&samples, level).map(Into::into).map_err(to_py)
}

#[pyfunction]
fn simulate_bridge_noncross(py: Python<'_>, a: f64, b: f64, sbar: f64, y: f64, spec: PyMcSpec) -> PyResult<PyMcEstimate> {
    py.detach(|| core::montecarlo::simulate_bridge_noncross(a, b, sbar, y, &spec.inner))
        .map(Into::into)
        .map_err(to_py)
}

/// Run the analytic-versus-simulation report. Returns `(all_ok, table)`.
#[pyfunction]
#[pyo3(signature = (scope="all", spec=None, bridges=100_000))]
fn validate(py: Python<'_>, scope: &str, spec: Option<PyMcSpec>, bridges: usize) -> PyResult<(bool, String)> {
    use core::validation::{run, Scope, ValidationConfig};
    let scope = match scope {
        "marginal" => Scope::Marginal,
        "joint" => Scope::Joint,
        "moments" => Scope::Moments,
        "bridge" => Scope::Bridge,
        "all" => Scope::All,
        other => return Err(PyValueError::new_err(format!("unknown scope {other:?}"))),
    };
    let mut config = ValidationConfig { bridges, ..ValidationConfig::default() };
    if let Some(s) = spec {
        config.mc = s.inner;
    }
    let report = py.detach(|| run(scope, &config)).map_err(to_py)?;
    Ok((report.all_ok(), report.render()))
}

#[pymodule]
fn slepian(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQuadratureSpec>()?;
    m.add_class::<PyMcSpec>()?;
    m.add_class::<PyMcEstimate>()?;
    m.add_class::<PyRunningMaxSamples>()?;
    m.add_function(wrap_pyfunction!(std_normal_pdf, m)?)?;
    m.add_function(wrap_pyfunction!(std_normal_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(exp_mul_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(warp, m)?)?;
    m.add_function(wrap_pyfunction!(unwarp, m)?)?;
    m.add_function(wrap_pyfunction!(bl_finite, m)?)?;
    m.add_function(wrap_pyfunction!(bl_infinite, m)?)?;
    m.add_function(wrap_pyfunction!(bridge_noncross, m)?)?;
    m.add_function(wrap_pyfunction!(segment_noncross, m)?)?;
    m.add_function(wrap_pyfunction!(running_max_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(running_max_pdf, m)?)?;
    m.add_function(wrap_pyfunction!(global_max_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(prob_nonpositive, m)?)?;
    m.add_function(wrap_pyfunction!(joint_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(mean, m)?)?;
    m.add_function(wrap_pyfunction!(second_moment, m)?)?;
    m.add_function(wrap_pyfunction!(second_moment_uncorrected, m)?)?;
    m.add_function(wrap_pyfunction!(variance, m)?)?;
    m.add_function(wrap_pyfunction!(mgf, m)?)?;
    m.add_function(wrap_pyfunction!(moment_k, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_running_max, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_bridge_noncross, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    Ok(())
}
