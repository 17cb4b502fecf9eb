//! Python bindings: `import qchan`.
//!
//! Matrices cross the boundary as nested lists of complex numbers (anything
//! indexable as rows of numbers is accepted, including NumPy arrays).

use std::collections::BTreeMap;

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use qchan_core::channels;
use qchan_core::matrix::{BlochVector, ComplexMatrix, DensityMatrix};
use qchan_core::optimizer::{self, OptimizerConfig};
use qchan_core::quantumness::{self, ClosedForm};
use qchan_core::{states, KrausChannel};

type Rows = Vec<Vec<Complex64>>;

fn py_err(e: qchan_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(rows: Rows) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(&rows).map_err(py_err)
}

fn to_state(rows: Rows) -> PyResult<DensityMatrix> {
    DensityMatrix::new(to_matrix(rows)?).map_err(py_err)
}

fn to_rows(m: &ComplexMatrix) -> Rows {
    let n = m.dim();
    (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j)).collect())
        .collect()
}

fn to_bloch(v: [f64; 3]) -> PyResult<BlochVector> {
    BlochVector::new(v[0], v[1], v[2]).map_err(py_err)
}

/// A quantum channel given by Kraus operators.
#[pyclass(name = "Channel", module = "qchan", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyChannel {
    inner: KrausChannel,
}

fn wrap(ch: qchan_core::Result<KrausChannel>) -> PyResult<PyChannel> {
    ch.map(|inner| PyChannel { inner }).map_err(py_err)
}

#[pymethods]
impl PyChannel {
    /// Channel from explicit Kraus operators; they must satisfy completeness.
    #[new]
    fn new(label: String, kraus_ops: Vec<Rows>) -> PyResult<Self> {
        let ops = kraus_ops
            .into_iter()
            .map(to_matrix)
            .collect::<PyResult<Vec<_>>>()?;
        wrap(KrausChannel::new(label, ops))
    }

    #[staticmethod]
    fn identity() -> Self {
        Self {
            inner: channels::identity(),
        }
    }

    #[staticmethod]
    fn rtn(lam: f64) -> PyResult<Self> {
        wrap(channels::rtn(lam))
    }

    #[staticmethod]
    fn nmd(omega: f64) -> PyResult<Self> {
        wrap(channels::nmd(omega))
    }

    #[staticmethod]
    fn pd(gamma: f64) -> PyResult<Self> {
        wrap(channels::pd(gamma))
    }

    #[staticmethod]
    fn ad(gamma: f64) -> PyResult<Self> {
        wrap(channels::ad(gamma))
    }

    #[staticmethod]
    fn gad(alpha: f64, xi: f64) -> PyResult<Self> {
        wrap(channels::gad(alpha, xi))
    }

    #[staticmethod]
    fn unruh(r: f64) -> PyResult<Self> {
        wrap(channels::unruh(r))
    }

    #[staticmethod]
    fn gdc(p: [f64; 4]) -> PyResult<Self> {
        wrap(channels::gdc(p))
    }

    /// Built-in channel from its label and a parameter dict.
    #[staticmethod]
    fn from_params(label: &str, params: BTreeMap<String, f64>) -> PyResult<Self> {
        wrap(channels::from_params(label, &params))
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    #[getter]
    fn params(&self) -> BTreeMap<String, f64> {
        self.inner.kind().params()
    }

    fn kraus_ops(&self) -> Vec<Rows> {
        self.inner.kraus_ops().iter().map(to_rows).collect()
    }

    fn completeness_deviation(&self) -> f64 {
        self.inner.completeness_deviation()
    }

    /// Applies the channel to a density matrix.
    fn apply(&self, rho: Rows) -> PyResult<Rows> {
        let out = self.inner.apply(&to_state(rho)?).map_err(py_err)?;
        Ok(to_rows(out.matrix()))
    }

    fn __repr__(&self) -> String {
        let params: Vec<String> = self
            .inner
            .kind()
            .params()
            .iter()
            .map(|(k, v)| format!("{k:?}: {v}"))
            .collect();
        format!(
            "Channel({:?}, {{{}}})",
            self.inner.label(),
            params.join(", ")
        )
    }
}

#[pyclass(name = "QuantumnessResult", module = "qchan", frozen, get_all)]
struct PyQuantumnessResult {
    channel: String,
    mu: f64,
    /// `(x, phi, y, xi)` of the maximizing input pair.
    argmax: (f64, f64, f64, f64),
    closed_form: Option<f64>,
    abs_error: Option<f64>,
    grid_mu: f64,
    evaluations: u64,
    converged: bool,
}

#[pymethods]
impl PyQuantumnessResult {
    fn __repr__(&self) -> String {
        let closed_form = self
            .closed_form
            .map_or("None".to_string(), |v| v.to_string());
        let converged = if self.converged { "True" } else { "False" };
        format!(
            "QuantumnessResult(channel={:?}, mu={}, closed_form={closed_form}, converged={converged})",
            self.channel, self.mu
        )
    }
}

fn config(grid: usize, iterations: usize, tol: f64, seed: u64) -> PyResult<OptimizerConfig> {
    let cfg = OptimizerConfig {
        grid_points_per_angle: grid,
        refinement_iterations: iterations,
        refinement_tolerance: tol,
        seed,
        ..OptimizerConfig::default()
    };
    cfg.validate().map_err(py_err)?;
    Ok(cfg)
}

/// Maximum output incompatibility over pairs of pure inputs.
#[pyfunction]
#[pyo3(signature = (channel, grid = 24, iterations = 200, tol = 1e-10, seed = 0))]
fn maximize_mu(
    py: Python<'_>,
    channel: &PyChannel,
    grid: usize,
    iterations: usize,
    tol: f64,
    seed: u64,
) -> PyResult<PyQuantumnessResult> {
    let cfg = config(grid, iterations, tol, seed)?;
    let ch = channel.inner.clone();
    let r = py
        .detach(move || optimizer::maximize_mu(&ch, &cfg))
        .map_err(py_err)?;
    let a = r.argmax.as_array();
    Ok(PyQuantumnessResult {
        channel: r.channel,
        mu: r.mu,
        argmax: (a[0], a[1], a[2], a[3]),
        closed_form: r.closed_form,
        abs_error: r.abs_error,
        grid_mu: r.grid_mu,
        evaluations: r.evaluations,
        converged: r.converged,
    })
}

/// Exhaustive maximum over the `n⁴` angle grid, without refinement.
#[pyfunction]
fn brute_force_mu(py: Python<'_>, channel: &PyChannel, n: usize) -> PyResult<f64> {
    let ch = channel.inner.clone();
    py.detach(move || optimizer::brute_force_mu(&ch, n))
        .map_err(py_err)
}

/// Largest output incompatibility over random mixed input pairs.
#[pyfunction]
#[pyo3(signature = (channel, samples = 2000, seed = 0))]
fn mixed_state_diagnostic(channel: &PyChannel, samples: usize, seed: u64) -> PyResult<f64> {
    let cfg = OptimizerConfig {
        include_mixed_diagnostic: true,
        mixed_samples: samples,
        seed,
        ..OptimizerConfig::default()
    };
    optimizer::mixed_state_diagnostic(&channel.inner, &cfg).map_err(py_err)
}

/// Tabulated μ for a built-in channel, or `None` when only unverified
/// reference expressions exist.
#[pyfunction]
fn closed_form_mu(label: &str, params: BTreeMap<String, f64>) -> PyResult<Option<f64>> {
    Ok(
        match quantumness::closed_form_mu(label, &params).map_err(py_err)? {
            ClosedForm::Trusted { value } => Some(value),
            ClosedForm::Unverified { .. } => None,
        },
    )
}

/// `2‖[ρ, σ]‖²`.
#[pyfunction]
fn incompatibility(rho: Rows, sigma: Rows) -> PyResult<f64> {
    quantumness::incompatibility(&to_state(rho)?, &to_state(sigma)?).map_err(py_err)
}

/// `|a × b|²` for Bloch vectors.
#[pyfunction]
fn incompatibility_bloch(a: [f64; 3], b: [f64; 3]) -> PyResult<f64> {
    Ok(quantumness::incompatibility_bloch(
        &to_bloch(a)?,
        &to_bloch(b)?,
    ))
}

/// `(Tr[ρ²σ²], Tr[(ρσ)²])`.
#[pyfunction]
fn visibilities(rho: Rows, sigma: Rows) -> PyResult<(f64, f64)> {
    let v = quantumness::visibilities(&to_state(rho)?, &to_state(sigma)?).map_err(py_err)?;
    Ok((v.v1, v.v2))
}

#[pyfunction]
fn coherence_l1(rho: Rows) -> PyResult<f64> {
    Ok(quantumness::coherence_l1(&to_state(rho)?))
}

#[pyfunction]
fn pure_state(x: f64, phi: f64) -> Rows {
    to_rows(states::pure_state(x, phi).matrix())
}

/// The input pair at `(x, φ)` and `(x + π/2, φ)`, whose incompatibility is 1.
#[pyfunction]
fn max_noncommuting_pair(x: f64, phi: f64) -> (Rows, Rows) {
    let (a, b) = states::max_noncommuting_pair(x, phi);
    (to_rows(a.matrix()), to_rows(b.matrix()))
}

#[pyfunction]
fn rtn_kernel(t: f64, gamma: f64, b: f64) -> PyResult<f64> {
    channels::rtn_kernel(t, gamma, b).map_err(py_err)
}

#[pyfunction]
fn nmd_kernel(p: f64) -> PyResult<f64> {
    channels::nmd_kernel(p).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (omega, acceleration, c = 1.0))]
fn unruh_angle(omega: f64, acceleration: f64, c: f64) -> PyResult<f64> {
    channels::unruh_angle(omega, acceleration, c).map_err(py_err)
}

#[pymodule]
fn qchan(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChannel>()?;
    m.add_class::<PyQuantumnessResult>()?;
    m.add_function(wrap_pyfunction!(maximize_mu, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_mu, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_state_diagnostic, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_mu, m)?)?;
    m.add_function(wrap_pyfunction!(incompatibility, m)?)?;
    m.add_function(wrap_pyfunction!(incompatibility_bloch, m)?)?;
    m.add_function(wrap_pyfunction!(visibilities, m)?)?;
    m.add_function(wrap_pyfunction!(coherence_l1, m)?)?;
    m.add_function(wrap_pyfunction!(pure_state, m)?)?;
    m.add_function(wrap_pyfunction!(max_noncommuting_pair, m)?)?;
    m.add_function(wrap_pyfunction!(rtn_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(nmd_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(unruh_angle, m)?)?;
    m.add("CHANNELS", channels::LABELS.to_vec())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
