//! Python bindings: the core estimation types and operations, the worked
//! scenarios (returned as dicts), and the randomized sweeps.
//!
//! Build as a cdylib and import as `qestim_py`; see python/run_smoke.sh.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use qestim::estimate;
use qestim::grid;
use qestim::operators;
use qestim::scenarios;
use qestim::sweep;

fn err(e: qestim::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix_from_entries(dim: usize, entries: Vec<Complex64>) -> PyResult<qestim::ComplexMatrix> {
    qestim::ComplexMatrix::new(dim, dim, entries).map_err(err)
}

#[pyclass(name = "HermitianOperator", frozen)]
struct PyHermitian {
    inner: operators::HermitianOperator,
}

#[pymethods]
impl PyHermitian {
    /// Build from row-major entries of a dim×dim Hermitian matrix.
    #[new]
    fn new(dim: usize, entries: Vec<Complex64>) -> PyResult<Self> {
        Ok(Self {
            inner: operators::HermitianOperator::new(matrix_from_entries(dim, entries)?)
                .map_err(err)?,
        })
    }

    #[staticmethod]
    fn diagonal(values: Vec<f64>) -> Self {
        Self {
            inner: operators::HermitianOperator::diagonal(&values),
        }
    }

    #[staticmethod]
    fn pauli_x() -> Self {
        Self { inner: operators::HermitianOperator::pauli_x() }
    }

    #[staticmethod]
    fn pauli_y() -> Self {
        Self { inner: operators::HermitianOperator::pauli_y() }
    }

    #[staticmethod]
    fn pauli_z() -> Self {
        Self { inner: operators::HermitianOperator::pauli_z() }
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn entries(&self) -> Vec<Complex64> {
        self.inner.matrix().entries().to_vec()
    }

    /// A + c·I.
    fn shifted(&self, c: f64) -> Self {
        Self { inner: self.inner.shifted(c) }
    }
}

#[pyclass(name = "DensityOperator", frozen)]
struct PyDensity {
    inner: operators::DensityOperator,
}

#[pymethods]
impl PyDensity {
    /// Build from row-major entries after validating Hermiticity,
    /// positivity, and unit trace.
    #[new]
    fn new(dim: usize, entries: Vec<Complex64>) -> PyResult<Self> {
        Ok(Self {
            inner: operators::DensityOperator::new(matrix_from_entries(dim, entries)?)
                .map_err(err)?,
        })
    }

    /// Normalized |ψ⟩⟨ψ| from any nonzero amplitude vector.
    #[staticmethod]
    fn pure(amplitudes: Vec<Complex64>) -> PyResult<Self> {
        Ok(Self {
            inner: operators::make_pure_state(&amplitudes).map_err(err)?,
        })
    }

    #[staticmethod]
    fn maximally_mixed(dim: usize) -> Self {
        Self {
            inner: operators::DensityOperator::maximally_mixed(dim),
        }
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn entries(&self) -> Vec<Complex64> {
        self.inner.matrix().entries().to_vec()
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues()
    }
}

#[pyclass(name = "ProbOperatorMeasure", frozen)]
struct PyPom {
    inner: operators::ProbOperatorMeasure,
}

#[pymethods]
impl PyPom {
    /// Build from labeled row-major elements; validates positivity and
    /// completeness.
    #[new]
    fn new(dim: usize, labels: Vec<String>, elements: Vec<Vec<Complex64>>) -> PyResult<Self> {
        if labels.len() != elements.len() {
            return Err(PyValueError::new_err("labels and elements differ in length"));
        }
        let outcomes = labels
            .into_iter()
            .zip(elements)
            .map(|(label, entries)| Ok((label, matrix_from_entries(dim, entries)?)))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Self {
            inner: operators::ProbOperatorMeasure::new(outcomes).map_err(err)?,
        })
    }

    /// Rank-1 projective measurement from an orthonormal basis.
    #[staticmethod]
    fn projective(basis: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(Self {
            inner: operators::projective_pom(&basis).map_err(err)?,
        })
    }

    /// The four-outcome qubit measurement ¼(I + γ(s₁σx + s₂σy)).
    #[staticmethod]
    fn four_outcome(gamma: f64) -> PyResult<Self> {
        Ok(Self {
            inner: scenarios::four_outcome_pom(gamma).map_err(err)?,
        })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn labels(&self) -> Vec<String> {
        self.inner
            .outcomes()
            .iter()
            .map(|(label, _)| label.clone())
            .collect()
    }

    fn element(&self, m: usize) -> PyResult<Vec<Complex64>> {
        if m >= self.inner.len() {
            return Err(PyValueError::new_err(format!("outcome {m} out of range")));
        }
        Ok(self.inner.element(m).entries().to_vec())
    }
}

#[pyclass(name = "OutcomeEstimator", frozen)]
struct PyEstimator {
    inner: estimate::OutcomeEstimator,
}

#[pymethods]
impl PyEstimator {
    #[new]
    fn new(values: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: estimate::OutcomeEstimator::new(values).map_err(err)?,
        })
    }

    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Noise/spread analysis of one estimator.
#[pyclass(name = "EstimateReport", frozen)]
struct PyEstimateReport {
    #[pyo3(get)]
    noise_sq: f64,
    #[pyo3(get)]
    noise_bound_sq: f64,
    #[pyo3(get)]
    estimator_mean: f64,
    #[pyo3(get)]
    estimator_variance: f64,
    #[pyo3(get)]
    observable_variance: f64,
    #[pyo3(get)]
    is_optimal: bool,
}

impl From<estimate::EstimateReport> for PyEstimateReport {
    fn from(r: estimate::EstimateReport) -> Self {
        Self {
            noise_sq: r.noise_sq,
            noise_bound_sq: r.noise_bound_sq,
            estimator_mean: r.estimator_mean,
            estimator_variance: r.estimator_variance,
            observable_variance: r.observable_variance,
            is_optimal: r.is_optimal,
        }
    }
}

/// Two sides of a joint uncertainty relation.
#[pyclass(name = "JointReport", frozen)]
struct PyJointReport {
    #[pyo3(get)]
    lhs: f64,
    #[pyo3(get)]
    rhs: f64,
    #[pyo3(get)]
    slack: f64,
}

impl From<estimate::JointReport> for PyJointReport {
    fn from(r: estimate::JointReport) -> Self {
        Self {
            lhs: r.lhs,
            rhs: r.rhs,
            slack: r.slack,
        }
    }
}

#[pyfunction]
fn expectation(rho: &PyDensity, a: &PyHermitian) -> PyResult<f64> {
    operators::expectation(&rho.inner, &a.inner).map_err(err)
}

#[pyfunction]
fn variance(rho: &PyDensity, a: &PyHermitian) -> PyResult<f64> {
    operators::variance(&rho.inner, &a.inner).map_err(err)
}

#[pyfunction]
fn commutator_bound(rho: &PyDensity, a: &PyHermitian, b: &PyHermitian) -> PyResult<f64> {
    operators::commutator_bound(&rho.inner, &a.inner, &b.inner).map_err(err)
}

#[pyfunction]
fn outcome_probabilities(rho: &PyDensity, pom: &PyPom) -> PyResult<Vec<f64>> {
    estimate::outcome_probabilities(&rho.inner, &pom.inner).map_err(err)
}

#[pyfunction]
fn signal_overlap(rho: &PyDensity, pom: &PyPom, a: &PyHermitian) -> PyResult<Vec<f64>> {
    estimate::signal_overlap(&rho.inner, &pom.inner, &a.inner).map_err(err)
}

#[pyfunction]
fn asym_overlap(rho: &PyDensity, pom: &PyPom, a: &PyHermitian) -> PyResult<Vec<f64>> {
    estimate::asym_overlap(&rho.inner, &pom.inner, &a.inner).map_err(err)
}

#[pyfunction]
fn noise_sq(rho: &PyDensity, pom: &PyPom, a: &PyHermitian, f: &PyEstimator) -> PyResult<f64> {
    estimate::noise_sq(&rho.inner, &pom.inner, &a.inner, &f.inner).map_err(err)
}

#[pyfunction]
fn optimal_estimator(rho: &PyDensity, pom: &PyPom, a: &PyHermitian) -> PyResult<PyEstimator> {
    Ok(PyEstimator {
        inner: estimate::optimal_estimator(&rho.inner, &pom.inner, &a.inner).map_err(err)?,
    })
}

#[pyfunction]
fn noise_lower_bound_sq(rho: &PyDensity, pom: &PyPom, a: &PyHermitian) -> PyResult<f64> {
    estimate::noise_lower_bound_sq(&rho.inner, &pom.inner, &a.inner).map_err(err)
}

#[pyfunction]
fn analyze_estimator(
    rho: &PyDensity,
    pom: &PyPom,
    a: &PyHermitian,
    f: &PyEstimator,
) -> PyResult<PyEstimateReport> {
    Ok(estimate::analyze_estimator(&rho.inner, &pom.inner, &a.inner, &f.inner)
        .map_err(err)?
        .into())
}

#[pyfunction]
fn joint_check(
    rho: &PyDensity,
    pom: &PyPom,
    a: &PyHermitian,
    b: &PyHermitian,
    f: &PyEstimator,
    g: &PyEstimator,
) -> PyResult<PyJointReport> {
    Ok(
        estimate::joint_check(&rho.inner, &pom.inner, &a.inner, &b.inner, &f.inner, &g.inner)
            .map_err(err)?
            .into(),
    )
}

#[pyfunction]
fn unbiasedness_defect(pom: &PyPom, f: &PyEstimator, a: &PyHermitian) -> PyResult<f64> {
    estimate::unbiasedness_defect(&pom.inner, &f.inner, &a.inner).map_err(err)
}

#[pyfunction]
fn unbiased_product_check(
    rho: &PyDensity,
    pom: &PyPom,
    a: &PyHermitian,
    b: &PyHermitian,
    f: &PyEstimator,
    g: &PyEstimator,
) -> PyResult<PyJointReport> {
    Ok(estimate::unbiased_product_check(
        &rho.inner, &pom.inner, &a.inner, &b.inner, &f.inner, &g.inner,
    )
    .map_err(err)?
    .into())
}

fn line_wavefunction(
    amplitudes: Vec<Complex64>,
    x0: f64,
    dx: f64,
    hbar: f64,
) -> PyResult<grid::GridWavefunction> {
    let g = grid::Grid1D::new(amplitudes.len(), x0, dx, hbar).map_err(err)?;
    grid::GridWavefunction::new(g, amplitudes).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (amplitudes, x0, dx, hbar = 1.0))]
fn fisher_length(amplitudes: Vec<Complex64>, x0: f64, dx: f64, hbar: f64) -> PyResult<f64> {
    grid::fisher_length(&line_wavefunction(amplitudes, x0, dx, hbar)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (amplitudes, x0, dx, hbar = 1.0))]
fn momentum_optimal_estimate(
    amplitudes: Vec<Complex64>,
    x0: f64,
    dx: f64,
    hbar: f64,
) -> PyResult<Vec<f64>> {
    grid::momentum_optimal_estimate(&line_wavefunction(amplitudes, x0, dx, hbar)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (amplitudes, potential, mass, x0, dx, hbar = 1.0))]
fn energy_optimal_estimate(
    amplitudes: Vec<Complex64>,
    potential: Vec<f64>,
    mass: f64,
    x0: f64,
    dx: f64,
    hbar: f64,
) -> PyResult<Vec<f64>> {
    grid::energy_optimal_estimate(&line_wavefunction(amplitudes, x0, dx, hbar)?, &potential, mass)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (amplitudes, x0, dx, hbar = 1.0))]
fn exact_uncertainty(
    py: Python<'_>,
    amplitudes: Vec<Complex64>,
    x0: f64,
    dx: f64,
    hbar: f64,
) -> PyResult<Py<PyDict>> {
    let check =
        grid::exact_uncertainty_check(&line_wavefunction(amplitudes, x0, dx, hbar)?).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("fisher_length", check.fisher_length)?;
    out.set_item("noise_sq_fisher", check.noise_sq_fisher)?;
    out.set_item("noise_sq_cross", check.noise_sq_cross)?;
    out.set_item("momentum_variance", check.momentum_variance)?;
    out.set_item("estimate_variance", check.estimate_variance)?;
    out.set_item("product", check.product)?;
    out.set_item("half_hbar", check.half_hbar)?;
    out.set_item("residual", check.residual)?;
    Ok(out.into())
}

fn scenario_dict(
    py: Python<'_>,
    results: Vec<(String, f64)>,
    checks: Vec<scenarios::Check>,
) -> PyResult<Py<PyDict>> {
    let out = PyDict::new(py);
    let values = PyDict::new(py);
    for (name, value) in results {
        values.set_item(name, value)?;
    }
    let check_list = PyList::empty(py);
    let mut all_pass = true;
    for check in checks {
        let entry = PyDict::new(py);
        entry.set_item("name", &check.name)?;
        entry.set_item("pass", check.pass)?;
        entry.set_item("observed", check.observed)?;
        entry.set_item("tolerance", check.tolerance)?;
        all_pass &= check.pass;
        check_list.append(entry)?;
    }
    out.set_item("results", values)?;
    out.set_item("checks", check_list)?;
    out.set_item("pass", all_pass)?;
    Ok(out.into())
}

/// Optimal Pauli estimation from a projective measurement; tokens as in the
/// CLI (`state`: 0,1,+x,-x,+y,-y; `observable`: sx,sy,sz; `basis`: x,y,z).
#[pyfunction]
#[pyo3(signature = (state = "+y", observable = "sz", basis = "x"))]
fn scenario_qubit(
    py: Python<'_>,
    state: &str,
    observable: &str,
    basis: &str,
) -> PyResult<Py<PyDict>> {
    let state = scenarios::QubitState::parse(state).map_err(err)?;
    let observable = scenarios::PauliAxis::parse(observable).map_err(err)?;
    let basis = scenarios::PauliAxis::parse(basis).map_err(err)?;
    let s = scenarios::run_qubit(&state, observable, basis).map_err(err)?;
    scenario_dict(py, s.results(), s.checks())
}

#[pyfunction]
#[pyo3(signature = (gamma, state = "0"))]
fn scenario_unbiased_joint(py: Python<'_>, gamma: f64, state: &str) -> PyResult<Py<PyDict>> {
    let state = scenarios::QubitState::parse(state).map_err(err)?;
    let s = scenarios::run_unbiased_joint(gamma, &state).map_err(err)?;
    scenario_dict(py, s.results(), s.checks())
}

#[pyfunction]
#[pyo3(signature = (beta = Complex64::new(0.0, 0.0), fock_dim = 32, grid_n = 64, grid_radius = None))]
fn scenario_heterodyne(
    py: Python<'_>,
    beta: Complex64,
    fock_dim: usize,
    grid_n: usize,
    grid_radius: Option<f64>,
) -> PyResult<Py<PyDict>> {
    let config = scenarios::HeterodyneConfig {
        fock_dim,
        grid_radius,
        grid_n,
        state: scenarios::OscillatorState::Coherent(beta),
    };
    let s = scenarios::run_heterodyne(&config).map_err(err)?;
    scenario_dict(py, s.results(), s.checks())
}

#[pyfunction]
#[pyo3(signature = (sigma = 0.5, tau = 0.5, a = 0.0, b = 1.0, hbar = 1.0, grid_n = 256, extent = None))]
#[allow(clippy::too_many_arguments)]
fn scenario_epr(
    py: Python<'_>,
    sigma: f64,
    tau: f64,
    a: f64,
    b: f64,
    hbar: f64,
    grid_n: usize,
    extent: Option<f64>,
) -> PyResult<Py<PyDict>> {
    let config = scenarios::EprConfig {
        sigma,
        tau,
        a,
        b,
        hbar,
        grid_n,
        grid_extent: extent,
    };
    let s = scenarios::run_epr(&config).map_err(err)?;
    scenario_dict(py, s.results(), s.checks(&config))
}

/// Randomized verification sweep; kind is "joint", "geometric", or "bound".
#[pyfunction]
#[pyo3(signature = (kind, trials = 1000, dim = 3, seed = 0))]
fn run_sweep(py: Python<'_>, kind: &str, trials: usize, dim: usize, seed: u64) -> PyResult<Py<PyDict>> {
    let config = sweep::SweepConfig {
        kind: sweep::SweepKind::parse(kind).map_err(err)?,
        trials,
        dim,
        seed,
    };
    let outcome = sweep::run_sweep(&config).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("kind", outcome.kind.name())?;
    out.set_item("trials", outcome.trials)?;
    out.set_item("dim", outcome.dim)?;
    out.set_item("seed", outcome.seed)?;
    out.set_item("worst", outcome.worst)?;
    out.set_item("worst_trial", outcome.worst_trial)?;
    out.set_item("failures", outcome.failures)?;
    out.set_item("pass", outcome.passed())?;
    Ok(out.into())
}

#[pymodule]
fn qestim_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHermitian>()?;
    m.add_class::<PyDensity>()?;
    m.add_class::<PyPom>()?;
    m.add_class::<PyEstimator>()?;
    m.add_class::<PyEstimateReport>()?;
    m.add_class::<PyJointReport>()?;
    m.add_function(wrap_pyfunction!(expectation, m)?)?;
    m.add_function(wrap_pyfunction!(variance, m)?)?;
    m.add_function(wrap_pyfunction!(commutator_bound, m)?)?;
    m.add_function(wrap_pyfunction!(outcome_probabilities, m)?)?;
    m.add_function(wrap_pyfunction!(signal_overlap, m)?)?;
    m.add_function(wrap_pyfunction!(asym_overlap, m)?)?;
    m.add_function(wrap_pyfunction!(noise_sq, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_estimator, m)?)?;
    m.add_function(wrap_pyfunction!(noise_lower_bound_sq, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_estimator, m)?)?;
    m.add_function(wrap_pyfunction!(joint_check, m)?)?;
    m.add_function(wrap_pyfunction!(unbiasedness_defect, m)?)?;
    m.add_function(wrap_pyfunction!(unbiased_product_check, m)?)?;
    m.add_function(wrap_pyfunction!(fisher_length, m)?)?;
    m.add_function(wrap_pyfunction!(momentum_optimal_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(energy_optimal_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(exact_uncertainty, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_qubit, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_unbiased_joint, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_heterodyne, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_epr, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}
