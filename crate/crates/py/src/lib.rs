//! Python bindings for `matgame`.
//!
//! Matrices may be passed as a `GameMatrix` or as a list of row lists. Claim reports come
//! back as plain dicts decoded from the same JSON the CLI writes.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use matgame::claims::{self, ClaimId, DEFAULT_CLAIM_TOL};
use matgame::ensemble::{self, EnsembleFamily, EnsembleSpec};
use matgame::solver::{self, DEFAULT_SOLVE_TOL};
use matgame::spectral::{self, GordanBranch, DEFAULT_PERRON_TOL, DEFAULT_RANK_TOL};
use matgame::{Auditor, Error, MatrixFormat, MixedStrategy, Player};

fn py_err(e: Error) -> PyErr {
    if e.is_internal() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn json_value<'py, T: Serialize + ?Sized>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (matgame::to_json(value),))
}

#[pyclass(name = "GameMatrix", module = "pymatgame", frozen, from_py_object)]
#[derive(Clone)]
struct PyGameMatrix(matgame::GameMatrix);

#[pymethods]
impl PyGameMatrix {
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        matgame::GameMatrix::from_rows(&rows).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn diagonal(d: Vec<f64>) -> PyResult<Self> {
        matgame::GameMatrix::diagonal(&d).map(Self).map_err(py_err)
    }

    #[getter]
    fn rows(&self) -> usize {
        self.0.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.0.cols()
    }

    fn to_list(&self) -> Vec<Vec<f64>> {
        self.0.to_rows()
    }

    fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    fn negated(&self) -> Self {
        Self(self.0.negated())
    }

    fn __getitem__(&self, index: (usize, usize)) -> PyResult<f64> {
        let (i, j) = index;
        if i >= self.0.rows() || j >= self.0.cols() {
            return Err(pyo3::exceptions::PyIndexError::new_err("matrix index out of range"));
        }
        Ok(self.0.get(i, j))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("GameMatrix({})", self.0)
    }
}

/// A `GameMatrix` or a list of row lists.
#[derive(FromPyObject)]
enum MatrixArg {
    Matrix(PyGameMatrix),
    Rows(Vec<Vec<f64>>),
}

impl MatrixArg {
    fn into_matrix(self) -> PyResult<matgame::GameMatrix> {
        match self {
            MatrixArg::Matrix(m) => Ok(m.0),
            MatrixArg::Rows(rows) => matgame::GameMatrix::from_rows(&rows).map_err(py_err),
        }
    }
}

#[pyclass(name = "GameSolution", module = "pymatgame", frozen, get_all)]
struct PyGameSolution {
    value: f64,
    row_strategy: Vec<f64>,
    col_strategy: Vec<f64>,
    duality_gap: f64,
    tolerance: f64,
}

#[pymethods]
impl PyGameSolution {
    fn __repr__(&self) -> String {
        format!(
            "GameSolution(value={:?}, row_strategy={:?}, col_strategy={:?})",
            self.value, self.row_strategy, self.col_strategy
        )
    }
}

#[pyclass(name = "OracleSolution", module = "pymatgame", frozen, get_all)]
struct PyOracleSolution {
    value: f64,
    row_support: Vec<usize>,
    col_support: Vec<usize>,
    row_strategy: Vec<f64>,
    col_strategy: Vec<f64>,
}

#[pyclass(name = "SpectralCert", module = "pymatgame", frozen, get_all)]
struct PySpectralCert {
    perron_root: f64,
    perron_vector: Vec<f64>,
    residual: f64,
    iterations: usize,
}

#[pyclass(name = "GordanVerdict", module = "pymatgame", frozen, get_all)]
struct PyGordanVerdict {
    branch: String,
    witness: Vec<f64>,
}

#[pyfunction]
#[pyo3(signature = (a, tol = DEFAULT_SOLVE_TOL))]
fn solve_game(a: MatrixArg, tol: f64) -> PyResult<PyGameSolution> {
    let s = solver::solve_game(&a.into_matrix()?, tol).map_err(py_err)?;
    Ok(PyGameSolution {
        value: s.value,
        row_strategy: s.row_strategy.weights().to_vec(),
        col_strategy: s.col_strategy.weights().to_vec(),
        duality_gap: s.duality_gap,
        tolerance: s.tolerance,
    })
}

#[pyfunction]
fn oracle_solve(a: MatrixArg) -> PyResult<PyOracleSolution> {
    let o = solver::oracle_solve(&a.into_matrix()?).map_err(py_err)?;
    Ok(PyOracleSolution {
        value: o.value,
        row_strategy: o.row_strategy.weights().to_vec(),
        col_strategy: o.col_strategy.weights().to_vec(),
        row_support: o.row_support,
        col_support: o.col_support,
    })
}

#[pyfunction]
fn payoff(a: MatrixArg, x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    let x = MixedStrategy::new(Player::Row, x).map_err(py_err)?;
    let y = MixedStrategy::new(Player::Col, y).map_err(py_err)?;
    matgame::payoff(&a.into_matrix()?, &x, &y).map_err(py_err)
}

/// `player` is "row" or "col".
#[pyfunction]
#[pyo3(signature = (a, s, v, tol = DEFAULT_SOLVE_TOL, player = "row"))]
fn is_optimal_dominated(a: MatrixArg, s: Vec<f64>, v: f64, tol: f64, player: &str) -> PyResult<bool> {
    let player = match player {
        "row" => Player::Row,
        "col" => Player::Col,
        other => return Err(PyValueError::new_err(format!("unknown player {other:?}"))),
    };
    let s = MixedStrategy::new(player, s).map_err(py_err)?;
    solver::is_optimal_dominated(&a.into_matrix()?, &s, v, tol).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (a, tol = DEFAULT_PERRON_TOL))]
fn perron(a: MatrixArg, tol: f64) -> PyResult<PySpectralCert> {
    let c = spectral::perron(&a.into_matrix()?, tol).map_err(py_err)?;
    Ok(PySpectralCert {
        perron_root: c.perron_root,
        perron_vector: c.perron_vector,
        residual: c.residual,
        iterations: c.iterations,
    })
}

/// Returns the kernel basis as a list of vectors.
#[pyfunction]
#[pyo3(signature = (a, rank_tol = DEFAULT_RANK_TOL))]
fn null_space(a: MatrixArg, rank_tol: f64) -> PyResult<Vec<Vec<f64>>> {
    Ok(spectral::null_space(&a.into_matrix()?, rank_tol).basis_vectors)
}

#[pyfunction]
fn gordan(a: MatrixArg) -> PyResult<PyGordanVerdict> {
    let g = spectral::gordan(&a.into_matrix()?).map_err(py_err)?;
    Ok(PyGordanVerdict {
        branch: match g.branch {
            GordanBranch::NonnegativeKernel => "NonnegativeKernel",
            GordanBranch::PositiveImage => "PositiveImage",
        }
        .to_string(),
        witness: g.witness,
    })
}

#[pyfunction]
fn stochastic_eigenvector(a: MatrixArg, lambda: f64) -> PyResult<Option<Vec<f64>>> {
    let w = spectral::stochastic_eigenvector(&a.into_matrix()?, lambda).map_err(py_err)?;
    Ok(w.map(|s| s.weights().to_vec()))
}

/// Runs one claim checker; returns a list of report dicts.
#[pyfunction]
#[pyo3(signature = (claim, a, lambdas = vec![], tol = DEFAULT_CLAIM_TOL))]
fn check_claim<'py>(
    py: Python<'py>,
    claim: &str,
    a: MatrixArg,
    lambdas: Vec<f64>,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let claim: ClaimId = claim.parse().map_err(py_err)?;
    let reports = Auditor::new(tol)
        .check(claim, &a.into_matrix()?, &lambdas)
        .map_err(py_err)?;
    json_value(py, &reports)
}

#[pyfunction]
#[pyo3(signature = (d, tol = DEFAULT_CLAIM_TOL))]
fn check_diagonal<'py>(py: Python<'py>, d: Vec<f64>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
    json_value(py, &claims::check_diagonal(&d, tol).map_err(py_err)?)
}

#[pyfunction]
#[pyo3(signature = (a, tol = DEFAULT_CLAIM_TOL))]
fn check_skew<'py>(py: Python<'py>, a: MatrixArg, tol: f64) -> PyResult<Bound<'py, PyAny>> {
    json_value(py, &claims::check_skew(&a.into_matrix()?, tol).map_err(py_err)?)
}

#[pyfunction]
#[pyo3(signature = (a, tol = DEFAULT_CLAIM_TOL))]
fn check_neg_transpose<'py>(py: Python<'py>, a: MatrixArg, tol: f64) -> PyResult<Bound<'py, PyAny>> {
    json_value(py, &claims::check_neg_transpose(&a.into_matrix()?, tol).map_err(py_err)?)
}

#[pyfunction]
#[pyo3(signature = (a, lambdas = vec![], tol = DEFAULT_CLAIM_TOL))]
fn check_eigenspace_lemma5<'py>(
    py: Python<'py>,
    a: MatrixArg,
    lambdas: Vec<f64>,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    json_value(
        py,
        &claims::check_eigenspace_lemma5(&a.into_matrix()?, &lambdas, tol).map_err(py_err)?,
    )
}

#[pyfunction]
fn check_gordan_theorem3<'py>(py: Python<'py>, a: MatrixArg) -> PyResult<Bound<'py, PyAny>> {
    json_value(py, &claims::check_gordan_theorem3(&a.into_matrix()?).map_err(py_err)?)
}

#[pyfunction]
#[pyo3(signature = (a, tol = DEFAULT_CLAIM_TOL))]
fn check_positive_dominated<'py>(py: Python<'py>, a: MatrixArg, tol: f64) -> PyResult<Bound<'py, PyAny>> {
    json_value(py, &claims::check_positive_dominated(&a.into_matrix()?, tol).map_err(py_err)?)
}

#[pyfunction]
#[pyo3(signature = (a, lambda, tol = DEFAULT_CLAIM_TOL))]
fn check_shifted_eigen<'py>(py: Python<'py>, a: MatrixArg, lambda: f64, tol: f64) -> PyResult<Bound<'py, PyAny>> {
    json_value(py, &claims::check_shifted_eigen(&a.into_matrix()?, lambda, tol).map_err(py_err)?)
}

#[pyfunction]
#[pyo3(signature = (text, format = "csv"))]
fn parse_matrix(text: &str, format: &str) -> PyResult<PyGameMatrix> {
    let format: MatrixFormat = format.parse().map_err(py_err)?;
    matgame::parse_matrix(text, format).map(PyGameMatrix).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (a, format = "csv"))]
fn render_matrix(a: MatrixArg, format: &str) -> PyResult<String> {
    let format: MatrixFormat = format.parse().map_err(py_err)?;
    Ok(matgame::render_matrix(&a.into_matrix()?, format))
}

#[pyfunction]
#[pyo3(signature = (family, size, trials, seed, cols = None, lo = -1.0, hi = 1.0))]
fn generate_ensemble(
    family: &str,
    size: usize,
    trials: usize,
    seed: u64,
    cols: Option<usize>,
    lo: f64,
    hi: f64,
) -> PyResult<Vec<PyGameMatrix>> {
    let family: EnsembleFamily = family.parse().map_err(py_err)?;
    let spec = EnsembleSpec::new(family, size, trials, seed)
        .with_cols(cols.unwrap_or(size))
        .with_range(lo, hi);
    let matrices = ensemble::generate_ensemble(&spec).map_err(py_err)?;
    Ok(matrices.into_iter().map(PyGameMatrix).collect())
}

#[pymodule]
fn pymatgame(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGameMatrix>()?;
    m.add_class::<PyGameSolution>()?;
    m.add_class::<PyOracleSolution>()?;
    m.add_class::<PySpectralCert>()?;
    m.add_class::<PyGordanVerdict>()?;
    m.add_function(wrap_pyfunction!(solve_game, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_solve, m)?)?;
    m.add_function(wrap_pyfunction!(payoff, m)?)?;
    m.add_function(wrap_pyfunction!(is_optimal_dominated, m)?)?;
    m.add_function(wrap_pyfunction!(perron, m)?)?;
    m.add_function(wrap_pyfunction!(null_space, m)?)?;
    m.add_function(wrap_pyfunction!(gordan, m)?)?;
    m.add_function(wrap_pyfunction!(stochastic_eigenvector, m)?)?;
    m.add_function(wrap_pyfunction!(check_claim, m)?)?;
    m.add_function(wrap_pyfunction!(check_diagonal, m)?)?;
    m.add_function(wrap_pyfunction!(check_skew, m)?)?;
    m.add_function(wrap_pyfunction!(check_neg_transpose, m)?)?;
    m.add_function(wrap_pyfunction!(check_eigenspace_lemma5, m)?)?;
    m.add_function(wrap_pyfunction!(check_gordan_theorem3, m)?)?;
    m.add_function(wrap_pyfunction!(check_positive_dominated, m)?)?;
    m.add_function(wrap_pyfunction!(check_shifted_eigen, m)?)?;
    m.add_function(wrap_pyfunction!(parse_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(render_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(generate_ensemble, m)?)?;
    m.add("ALL_CLAIMS", ClaimId::ALL.iter().map(|c| c.name()).collect::<Vec<_>>())?;
    Ok(())
}
