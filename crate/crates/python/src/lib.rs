//! Python bindings.
//!
//! Domain errors surface as `ValueError`; search-budget exhaustion and
//! internal consistency failures as `RuntimeError`.

use std::collections::BTreeMap;

use cstat_sampsize::bench::{self, BenchConfig};
use cstat_sampsize::solvers::diagnostics;
use cstat_sampsize::verify::{self, GridSpec, SeRange};
use cstat_sampsize::{
    ConfidenceSpec, DiscriminationInputs, Error, IterativeConfig, SearchStrategy, SolverMethod,
};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(err: Error) -> PyErr {
    match err {
        Error::Domain { .. }
        | Error::NonFinite { .. }
        | Error::InvalidConfig(_)
        | Error::InvalidGrid(_)
        | Error::MissingBaseline(_) => PyValueError::new_err(err.to_string()),
        _ => PyRuntimeError::new_err(err.to_string()),
    }
}

fn method(name: &str) -> PyResult<SolverMethod> {
    name.parse()
        .map_err(|e: cstat_sampsize::model::UnknownMethod| PyValueError::new_err(e.to_string()))
}

fn methods(names: Option<Vec<String>>, default: &[SolverMethod]) -> PyResult<Vec<SolverMethod>> {
    match names {
        None => Ok(default.to_vec()),
        Some(names) => names.iter().map(|n| method(n)).collect(),
    }
}

fn strategy(name: &str) -> PyResult<SearchStrategy> {
    match name {
        "scan" => Ok(SearchStrategy::Scan),
        "bracketed" => Ok(SearchStrategy::Bracketed),
        other => Err(PyValueError::new_err(format!(
            "unknown search strategy `{other}` (expected `scan` or `bracketed`)"
        ))),
    }
}

/// Validated (C, phi, target SE) triple.
#[pyclass(name = "DiscriminationInputs", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyInputs {
    inner: DiscriminationInputs,
}

#[pymethods]
impl PyInputs {
    #[new]
    fn new(c: f64, phi: f64, se_target: f64) -> PyResult<Self> {
        let inner = DiscriminationInputs::new(c, phi, se_target).map_err(py_err)?;
        Ok(PyInputs { inner })
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.c()
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.inner.phi()
    }

    #[getter]
    fn se_target(&self) -> f64 {
        self.inner.se_target()
    }

    fn __repr__(&self) -> String {
        format!(
            "DiscriminationInputs(c={:?}, phi={:?}, se_target={:?})",
            self.inner.c(),
            self.inner.phi(),
            self.inner.se_target()
        )
    }
}

#[pyclass(name = "SampleSizeResult", frozen)]
struct PySampleSize {
    #[pyo3(get)]
    n_raw: f64,
    #[pyo3(get)]
    n: u64,
    #[pyo3(get)]
    method: String,
    #[pyo3(get)]
    inputs: PyInputs,
}

#[pymethods]
impl PySampleSize {
    fn __repr__(&self) -> String {
        format!(
            "SampleSizeResult(n={}, n_raw={:?}, method='{}')",
            self.n, self.n_raw, self.method
        )
    }
}

impl From<cstat_sampsize::SampleSizeResult> for PySampleSize {
    fn from(r: cstat_sampsize::SampleSizeResult) -> Self {
        PySampleSize {
            n_raw: r.n_raw,
            n: r.n,
            method: r.method.name().to_string(),
            inputs: PyInputs { inner: r.inputs },
        }
    }
}

#[pyfunction]
fn validate_inputs(c: f64, phi: f64, se_target: f64) -> PyResult<PyInputs> {
    PyInputs::new(c, phi, se_target)
}

/// Newcombe's SE of the C-statistic for a sample of size `n`.
#[pyfunction]
fn se_c(c: f64, phi: f64, n: f64) -> PyResult<f64> {
    cstat_sampsize::se_c(c, phi, n).map_err(py_err)
}

#[pyfunction]
fn se_c_squared_simplified(c: f64, phi: f64, n: f64) -> PyResult<f64> {
    cstat_sampsize::se_c_squared_simplified(c, phi, n).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (ci_width, level = ConfidenceSpec::DEFAULT_LEVEL))]
fn ci_width_to_se(ci_width: f64, level: f64) -> PyResult<f64> {
    let spec = ConfidenceSpec::new(ci_width, level).map_err(py_err)?;
    Ok(cstat_sampsize::ci_width_to_se(&spec))
}

#[pyfunction]
fn method_names() -> Vec<&'static str> {
    SolverMethod::ALL.iter().map(|m| m.name()).collect()
}

/// Sample size by one method (default `mathgpt`).
#[pyfunction]
#[pyo3(signature = (c, phi, se, method = "mathgpt"))]
fn solve(c: f64, phi: f64, se: f64, method: &str) -> PyResult<PySampleSize> {
    let inputs = DiscriminationInputs::new(c, phi, se).map_err(py_err)?;
    cstat_sampsize::solve(&inputs, self::method(method)?)
        .map(Into::into)
        .map_err(py_err)
}

/// Unrounded root from a closed-form method.
#[pyfunction]
#[pyo3(signature = (c, phi, se, method = "mathgpt"))]
fn n_raw(c: f64, phi: f64, se: f64, method: &str) -> PyResult<f64> {
    let inputs = DiscriminationInputs::new(c, phi, se).map_err(py_err)?;
    cstat_sampsize::n_raw(&inputs, self::method(method)?).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (c, phi, se, start_n = 2, max_n = 1_000_000, strategy = "scan"))]
fn n_iterative(
    c: f64,
    phi: f64,
    se: f64,
    start_n: u64,
    max_n: u64,
    strategy: &str,
) -> PyResult<PySampleSize> {
    let inputs = DiscriminationInputs::new(c, phi, se).map_err(py_err)?;
    let config = IterativeConfig::new(start_n, max_n, self::strategy(strategy)?).map_err(py_err)?;
    cstat_sampsize::n_iterative(&inputs, &config)
        .map(Into::into)
        .map_err(py_err)
}

/// Both roots of the squared equation, `(rejected, accepted)`.
#[pyfunction]
fn mathematica_roots(c: f64, phi: f64, se: f64) -> PyResult<(f64, f64)> {
    let inputs = DiscriminationInputs::new(c, phi, se).map_err(py_err)?;
    Ok(diagnostics::mathematica_roots(&inputs))
}

/// The five published examples, each as a dict with `c`, `phi`, `se`,
/// `expected_n`, `n_by_method` and `pass`.
#[pyfunction]
fn reproduce_table1(py: Python<'_>) -> PyResult<Vec<Bound<'_, PyDict>>> {
    verify::reproduce_table1()
        .into_iter()
        .map(|check| {
            let d = PyDict::new(py);
            d.set_item("c", check.inputs.c())?;
            d.set_item("phi", check.inputs.phi())?;
            d.set_item("se", check.inputs.se_target())?;
            d.set_item("expected_n", check.expected_n)?;
            let by_method: BTreeMap<&str, Option<u64>> = check
                .n_by_method
                .iter()
                .map(|(m, n)| (m.name(), *n))
                .collect();
            d.set_item("n_by_method", by_method)?;
            d.set_item("pass", check.pass)?;
            Ok(d)
        })
        .collect()
}

type Row = (String, f64, f64, f64, f64, u64);

fn rows(rows: &[cstat_sampsize::export::ResultRow]) -> Vec<Row> {
    rows.iter()
        .map(|r| (r.method.name().to_string(), r.c, r.phi, r.se, r.n_raw, r.n))
        .collect()
}

/// Evaluates a grid. Returns a dict with `rows` as
/// `(method, c, phi, se, n_raw, n)` tuples, `all_within_one` and
/// `max_pairwise_rel_diff`.
#[pyfunction]
#[pyo3(signature = (c_values, phi_values, se_values, methods = None, strategy = "scan"))]
fn run_sweep<'py>(
    py: Python<'py>,
    c_values: Vec<f64>,
    phi_values: Vec<f64>,
    se_values: Vec<f64>,
    methods: Option<Vec<String>>,
    strategy: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let methods = self::methods(methods, &[SolverMethod::MathGpt])?;
    let iterative = IterativeConfig {
        strategy: self::strategy(strategy)?,
        ..IterativeConfig::default()
    };
    let spec = GridSpec::new(c_values, phi_values, se_values, methods)
        .map_err(py_err)?
        .with_iterative(iterative);
    let report = py.detach(|| verify::run_sweep(&spec)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("rows", rows(&report.result_rows()))?;
    d.set_item("all_within_one", report.all_within_one)?;
    d.set_item("max_pairwise_rel_diff", report.max_pairwise_rel_diff)?;
    Ok(d)
}

/// Sample size against SE at fixed C as `(method, c, phi, se, n_raw, n)`
/// tuples.
#[pyfunction]
#[pyo3(signature = (c = 0.6, phi_values = vec![0.1, 0.2, 0.3, 0.4, 0.5], se_lo = 0.01, se_hi = 0.05, count = 100, methods = None))]
fn figure1_curves(
    c: f64,
    phi_values: Vec<f64>,
    se_lo: f64,
    se_hi: f64,
    count: usize,
    methods: Option<Vec<String>>,
) -> PyResult<Vec<Row>> {
    let methods = self::methods(methods, &SolverMethod::CLOSED)?;
    let range = SeRange {
        lo: se_lo,
        hi: se_hi,
        count,
    };
    verify::figure1_curves(c, &phi_values, range, &methods)
        .map(|r| rows(&r))
        .map_err(py_err)
}

/// Times each method and returns `{method: {min, q1, median, q3, max, mean,
/// samples_ns}}` plus `host` and `speedup_vs_iterative` when the iterative
/// method was timed.
#[pyfunction]
#[pyo3(signature = (methods = None, repetitions = 1000, warmup = 100, c = 0.7, phi = 0.1, se = 0.02551, strategy = "scan"))]
#[allow(clippy::too_many_arguments)]
fn run_bench<'py>(
    py: Python<'py>,
    methods: Option<Vec<String>>,
    repetitions: usize,
    warmup: usize,
    c: f64,
    phi: f64,
    se: f64,
    strategy: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let config = BenchConfig {
        methods: self::methods(methods, &SolverMethod::ALL)?,
        repetitions,
        warmup,
        inputs: DiscriminationInputs::new(c, phi, se).map_err(py_err)?,
        iterative: IterativeConfig {
            strategy: self::strategy(strategy)?,
            ..IterativeConfig::default()
        },
    };
    let report = py.detach(|| bench::run_bench(&config)).map_err(py_err)?;
    let out = PyDict::new(py);
    let timings = PyDict::new(py);
    for t in &report.timings {
        let d = PyDict::new(py);
        d.set_item("min", t.summary.min)?;
        d.set_item("q1", t.summary.q1)?;
        d.set_item("median", t.summary.median)?;
        d.set_item("q3", t.summary.q3)?;
        d.set_item("max", t.summary.max)?;
        d.set_item("mean", t.summary.mean)?;
        d.set_item("samples_ns", t.samples_ns.clone())?;
        timings.set_item(t.method.name(), d)?;
    }
    out.set_item("timings", timings)?;
    out.set_item("host", &report.host)?;
    out.set_item("warnings", report.warnings.clone())?;
    if let Ok(ratios) = bench::speedup_summary(&report, SolverMethod::Iterative) {
        let ratios: BTreeMap<&str, f64> = ratios.iter().map(|(m, r)| (m.name(), *r)).collect();
        out.set_item("speedup_vs_iterative", ratios)?;
    }
    Ok(out)
}

#[pymodule]
#[pyo3(name = "cstat_sampsize")]
fn cstat_sampsize_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyInputs>()?;
    m.add_class::<PySampleSize>()?;
    m.add_function(wrap_pyfunction!(validate_inputs, m)?)?;
    m.add_function(wrap_pyfunction!(se_c, m)?)?;
    m.add_function(wrap_pyfunction!(se_c_squared_simplified, m)?)?;
    m.add_function(wrap_pyfunction!(ci_width_to_se, m)?)?;
    m.add_function(wrap_pyfunction!(method_names, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(n_raw, m)?)?;
    m.add_function(wrap_pyfunction!(n_iterative, m)?)?;
    m.add_function(wrap_pyfunction!(mathematica_roots, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce_table1, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(figure1_curves, m)?)?;
    m.add_function(wrap_pyfunction!(run_bench, m)?)?;
    Ok(())
}
