//! Python bindings for the `edgelab` core library.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use edgelab::ensemble::{self as ens, DeformationQ, WeightSpec};
use edgelab::equilibrium::{self as eqm, Potential};
use edgelab::lab::{self, LabConfig, RunContext, Study};
use edgelab::{fredholm, idpii, special, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::OutOfRange(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// `(Ai(x), Ai'(x))`.
#[pyfunction]
fn airy(x: f64) -> PyResult<(f64, f64)> {
    special::airy(x).map(|p| (p.ai, p.aip)).map_err(to_py)
}

/// `F_beta(y) = int_0^inf v^beta log(1 + e^{-y-v}) dv`.
#[pyfunction]
fn f_beta(beta: f64, y: f64) -> PyResult<f64> {
    special::f_beta_quad(beta, y).map_err(to_py)
}

#[pyfunction]
fn polylog_alternating(s: f64, y: f64) -> PyResult<f64> {
    special::polylog_alternating(s, y).map_err(to_py)
}

/// Equilibrium measure of a one-cut potential, given by ascending coefficients.
#[pyclass(name = "Equilibrium", module = "edgelab")]
struct PyEquilibrium {
    inner: eqm::EquilibriumData,
}

#[pymethods]
impl PyEquilibrium {
    #[new]
    fn new(coeffs: Vec<f64>) -> PyResult<Self> {
        let v = Potential::new(coeffs).map_err(to_py)?;
        Ok(Self { inner: eqm::EquilibriumData::new(&v).map_err(to_py)? })
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.a
    }
    #[getter]
    fn b_minus(&self) -> f64 {
        self.inner.b_minus
    }
    #[getter]
    fn b_plus(&self) -> f64 {
        self.inner.b_plus
    }
    #[getter]
    fn shift(&self) -> f64 {
        self.inner.shift
    }
    #[getter]
    fn c_v(&self) -> f64 {
        self.inner.c_v
    }
    #[getter]
    fn ell(&self) -> f64 {
        self.inner.ell
    }
    #[getter]
    fn ell_asymptotic(&self) -> f64 {
        self.inner.ell_asymptotic
    }
    #[getter]
    fn h(&self) -> Vec<f64> {
        self.inner.h.coeffs().to_vec()
    }

    /// Density in the shifted frame, where the support is `[-a, 0]`.
    fn density(&self, x: f64) -> f64 {
        self.inner.density(x)
    }
    fn mass(&self) -> PyResult<f64> {
        self.inner.mass().map_err(to_py)
    }
    fn el_residual(&self, x: f64) -> PyResult<f64> {
        self.inner.el_residual(x).map_err(to_py)
    }
    fn szego_q0(&self, n: usize, s: f64, t: f64, higher: Vec<f64>) -> PyResult<f64> {
        let q = DeformationQ::from_t(t, &higher).map_err(to_py)?;
        eqm::szego_q0(&self.inner, q.poly(), n, s).map_err(to_py)
    }
}

#[pyfunction]
fn q0_limit(s: f64, t: f64, a: f64) -> PyResult<f64> {
    eqm::q0_limit(s, t, a).map_err(to_py)
}

fn weight(n: usize, s: f64, t: f64, higher: Option<Vec<f64>>) -> PyResult<WeightSpec> {
    let q = DeformationQ::from_t(t, &higher.unwrap_or_default()).map_err(to_py)?;
    WeightSpec::new(n, s, q).map_err(to_py)
}

/// Orthogonal polynomial ensemble for `sigma_n e^{-n V}`, with `Q(x) = -t x + sum higher[j] x^{j+2}`.
#[pyclass(name = "Ensemble", module = "edgelab")]
struct PyEnsemble {
    inner: ens::Ensemble,
}

#[pymethods]
impl PyEnsemble {
    #[new]
    #[pyo3(signature = (eq, n, s, t = 1.0, higher = None))]
    fn new(eq: &PyEquilibrium, n: usize, s: f64, t: f64, higher: Option<Vec<f64>>) -> PyResult<Self> {
        let spec = weight(n, s, t, higher)?;
        Ok(Self { inner: ens::Ensemble::new(&eq.inner, spec).map_err(to_py)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn log_h(&self) -> Vec<f64> {
        self.inner.log_h().to_vec()
    }
    fn kernel(&self, x: f64, y: f64) -> f64 {
        self.inner.cd_kernel(x, y)
    }
    fn kernel_sum(&self, x: f64, y: f64) -> f64 {
        self.inner.kernel_sum(x, y)
    }
    fn rescaled_edge_kernel(&self, u: f64, v: f64) -> f64 {
        self.inner.rescaled_edge_kernel(u, v)
    }
    fn dlog_lstat_ds(&self) -> f64 {
        self.inner.dlog_lstat_ds()
    }
}

/// `log L_n(s)` by the chosen route: `"gamma"`, `"det"` or `"integral"`.
#[pyfunction]
#[pyo3(signature = (eq, n, s, t = 1.0, higher = None, route = "gamma"))]
fn log_lstat(eq: &PyEquilibrium, n: usize, s: f64, t: f64, higher: Option<Vec<f64>>, route: &str) -> PyResult<f64> {
    let spec = weight(n, s, t, higher)?;
    match route {
        "gamma" => ens::log_lstat_gamma(&eq.inner, &spec),
        "det" => ens::log_lstat_det(&eq.inner, &spec),
        "integral" => ens::log_lstat_integral(&eq.inner, &spec),
        other => return Err(PyValueError::new_err(format!("unknown route {other:?}"))),
    }
    .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (eq, n, s, t = 1.0, higher = None))]
fn norming_ratio(eq: &PyEquilibrium, n: usize, s: f64, t: f64, higher: Option<Vec<f64>>) -> PyResult<f64> {
    ens::norming_ratio(&eq.inner, &weight(n, s, t, higher)?).map_err(to_py)
}

#[pyfunction]
fn ft_airy_kernel(u: f64, v: f64, t: f64) -> PyResult<f64> {
    fredholm::ft_airy_kernel(u, v, t).map_err(to_py)
}

/// `det(I - K_T)` on `L^2(-s, inf)`.
#[pyfunction]
#[pyo3(signature = (s, t, m = 80))]
fn fredholm_det_ft(s: f64, t: f64, m: usize) -> PyResult<f64> {
    fredholm::fredholm_det_ft(s, t, m).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (s, m = 80))]
fn fredholm_det_airy(s: f64, m: usize) -> PyResult<f64> {
    fredholm::fredholm_det_airy(s, m).map_err(to_py)
}

/// Solution of the integro-differential Painleve II system at one `T`.
#[pyclass(name = "IdPiiSolution", module = "edgelab")]
struct PyIdPii {
    inner: idpii::IdPiiSolution,
}

#[pymethods]
impl PyIdPii {
    #[getter]
    fn t(&self) -> f64 {
        self.inner.t
    }
    #[getter]
    fn boundary_ratio(&self) -> f64 {
        self.inner.boundary_ratio
    }
    #[getter]
    fn truncation_flag(&self) -> bool {
        self.inner.truncation_flag
    }
    #[getter]
    fn xi(&self) -> Vec<f64> {
        self.inner.xi.clone()
    }
    #[getter]
    fn s_grid(&self) -> Vec<f64> {
        self.inner.s_grid.clone()
    }
    fn i_at(&self, s: f64) -> PyResult<f64> {
        self.inner.i_at(s).map_err(to_py)
    }
    fn p_at(&self, s: f64) -> PyResult<f64> {
        self.inner.p_at(s).map_err(to_py)
    }
    /// `(Phi, dPhi/dS)` at `(xi, S)`.
    fn phi(&self, xi: f64, s: f64) -> PyResult<(f64, f64)> {
        self.inner.interp_phi(xi, s).map_err(to_py)
    }
    fn ode_self_residual(&self) -> f64 {
        self.inner.ode_self_residual()
    }
    /// Limiting kernel; the solution must have `T = t_param^{-3/2}`.
    fn k_infinity(&self, u: f64, v: f64, s: f64, t_param: f64) -> PyResult<f64> {
        idpii::k_infinity(&self.inner, u, v, s, t_param).map_err(to_py)
    }
}

#[pyfunction]
#[pyo3(signature = (t, s_max = None, ds = 0.005, h_xi = 0.04, store_every = 4))]
fn solve_idpii(py: Python<'_>, t: f64, s_max: Option<f64>, ds: f64, h_xi: f64, store_every: usize) -> PyResult<PyIdPii> {
    let mut cfg = idpii::IdPiiConfig::new(t);
    if let Some(m) = s_max {
        cfg.s_max = m;
    }
    cfg.n_steps = ((cfg.s_max - cfg.s_min) / ds).round().max(1.0) as usize;
    cfg.h_xi = h_xi;
    cfg.store_every = store_every;
    let inner = py.detach(|| idpii::solve_idpii(&cfg)).map_err(to_py)?;
    Ok(PyIdPii { inner })
}

/// Runs a lab study from TOML text and returns its records as dicts.
#[pyfunction]
#[pyo3(signature = (study, config_toml, workers = 1))]
fn run_study<'py>(py: Python<'py>, study: &str, config_toml: &str, workers: usize) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let st = Study::from_name(study).ok_or_else(|| PyValueError::new_err(format!("unknown study {study:?}")))?;
    let cfg = LabConfig::from_toml_str(config_toml).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let ctx = RunContext::new(&cfg);
    let records = py.detach(|| lab::run_study(st, &cfg, workers, &ctx));
    records
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("study", &r.study)?;
            d.set_item("quantity", &r.quantity)?;
            d.set_item("params", r.params.to_vec())?;
            d.set_item("value", r.value)?;
            d.set_item("aux", r.aux.to_vec())?;
            d.set_item("verdict", r.verdict.as_str())?;
            d.set_item("note", &r.note)?;
            d.set_item("timestamp", r.timestamp)?;
            d.set_item("config_hash", &r.config_hash)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
#[pyo3(name = "edgelab")]
pub fn edgelab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(airy, m)?)?;
    m.add_function(wrap_pyfunction!(f_beta, m)?)?;
    m.add_function(wrap_pyfunction!(polylog_alternating, m)?)?;
    m.add_function(wrap_pyfunction!(q0_limit, m)?)?;
    m.add_function(wrap_pyfunction!(log_lstat, m)?)?;
    m.add_function(wrap_pyfunction!(norming_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(ft_airy_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(fredholm_det_ft, m)?)?;
    m.add_function(wrap_pyfunction!(fredholm_det_airy, m)?)?;
    m.add_function(wrap_pyfunction!(solve_idpii, m)?)?;
    m.add_function(wrap_pyfunction!(run_study, m)?)?;
    m.add_class::<PyEquilibrium>()?;
    m.add_class::<PyEnsemble>()?;
    m.add_class::<PyIdPii>()?;
    Ok(())
}
