//! Python bindings for the covering-array toolkit. Rationals cross the
//! boundary as (numerator, denominator) decimal strings; matrices as
//! lists of row lists.

use num_traits::ToPrimitive;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tilecov::bounds::{self, CoveringParams, DegreeMode};
use tilecov::model::{self, ArrayMatrix, Provenance};
use tilecov::{construct as construct_mod, montecarlo, verify, Error};

fn to_py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_mode(mode: &str) -> PyResult<DegreeMode> {
    mode.parse().map_err(to_py_err)
}

fn matrix_to_rows(m: &ArrayMatrix) -> Vec<Vec<u32>> {
    // u32 rows so they cross into Python as lists of ints, not bytes
    (0..m.m)
        .map(|r| m.row(r).iter().map(|&v| v as u32).collect())
        .collect()
}

fn rows_to_matrix(rows: Vec<Vec<u8>>, alpha: u32) -> PyResult<ArrayMatrix> {
    ArrayMatrix::from_rows(rows, alpha, Provenance::External).map_err(to_py_err)
}

/// gamma_k as a (numerator, denominator) pair of decimal strings.
#[pyfunction]
fn gamma_k(alpha: u32, t: u32, k: u32) -> PyResult<(String, String)> {
    let g = bounds::gamma_k(alpha, t, k).map_err(to_py_err)?;
    Ok((g.numer().to_string(), g.denom().to_string()))
}

#[pyfunction]
fn gamma_k_float(alpha: u32, t: u32, k: u32) -> PyResult<f64> {
    let g = bounds::gamma_k(alpha, t, k).map_err(to_py_err)?;
    Ok(g.to_f64().unwrap())
}

#[pyfunction]
fn coefficient_baseline(alpha: u32, t: u32) -> PyResult<f64> {
    bounds::coefficient_baseline(alpha, t).map_err(to_py_err)
}

#[pyfunction]
fn coefficient_tiled(alpha: u32, t: u32, k: u32) -> PyResult<f64> {
    bounds::coefficient_tiled(alpha, t, k).map_err(to_py_err)
}

/// Full LLL bound report as a dict (gamma as decimal strings).
#[pyfunction]
#[pyo3(signature = (m, t, alpha, k, mode = "exact"))]
fn sufficient_n<'py>(
    py: Python<'py>,
    m: u32,
    t: u32,
    alpha: u32,
    k: u32,
    mode: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let params = CoveringParams::new(m, t, alpha).map_err(to_py_err)?;
    let report = bounds::sufficient_n(params, k, parse_mode(mode)?).map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("m", m)?;
    d.set_item("t", t)?;
    d.set_item("alpha", alpha)?;
    d.set_item("k", k)?;
    d.set_item("mode", mode)?;
    d.set_item("coefficient", report.coefficient)?;
    d.set_item("sufficient_n", report.sufficient_n)?;
    d.set_item("n_core", report.n_core)?;
    d.set_item(
        "gamma",
        (report.gamma.numer().to_string(), report.gamma.denom().to_string()),
    )?;
    d.set_item("lll_product", report.lll_product)?;
    d.set_item("augmentation_columns", report.augmentation_columns)?;
    Ok(d)
}

/// The 32 reference rows as (alpha, t, k, coefficient) tuples.
#[pyfunction]
fn paper_table() -> Vec<(u32, u32, u32, f64)> {
    bounds::paper_table()
}

#[pyfunction]
#[pyo3(signature = (m, t, alpha, n_core, k = 1, augment = true, seed = 0))]
fn sample_array(
    m: u32,
    t: u32,
    alpha: u32,
    n_core: usize,
    k: u32,
    augment: bool,
    seed: u64,
) -> PyResult<Vec<Vec<u32>>> {
    let params = CoveringParams::new(m, t, alpha).map_err(to_py_err)?;
    let matrix = model::sample_array(params, n_core, k, augment, seed).map_err(to_py_err)?;
    Ok(matrix_to_rows(&matrix))
}

#[pyfunction]
fn is_covering(rows: Vec<Vec<u8>>, alpha: u32, t: usize) -> PyResult<bool> {
    let matrix = rows_to_matrix(rows, alpha)?;
    verify::is_covering(&matrix, t).map_err(to_py_err)
}

/// Uncovered (row_set, vector) pairs in lexicographic order.
#[pyfunction]
fn missing_tuples(
    rows: Vec<Vec<u8>>,
    alpha: u32,
    t: usize,
) -> PyResult<Vec<(Vec<usize>, Vec<u32>)>> {
    let matrix = rows_to_matrix(rows, alpha)?;
    let report = verify::missing_tuples(&matrix, t).map_err(to_py_err)?;
    Ok(report
        .missing
        .into_iter()
        .map(|(rs, v)| (rs, v.into_iter().map(u32::from).collect()))
        .collect())
}

/// Build a covering array; returns (rows, resample_count).
#[pyfunction]
#[pyo3(signature = (m, t, alpha, k = 1, n = None, seed = 0, max_resamples = None))]
fn construct(
    m: u32,
    t: u32,
    alpha: u32,
    k: u32,
    n: Option<u64>,
    seed: u64,
    max_resamples: Option<u64>,
) -> PyResult<(Vec<Vec<u32>>, u64)> {
    let params = CoveringParams::new(m, t, alpha).map_err(to_py_err)?;
    let (matrix, log) =
        construct_mod::construct(params, k, n, seed, max_resamples, false).map_err(to_py_err)?;
    Ok((matrix_to_rows(&matrix), log.resample_count))
}

/// Exhaustive gamma_k oracle; returns (numerator, denominator) strings.
#[pyfunction]
#[pyo3(signature = (alpha, t, k, work_bound = montecarlo::DEFAULT_WORK_BOUND))]
fn enumerate_gamma(alpha: u32, t: u32, k: u32, work_bound: u64) -> PyResult<(String, String)> {
    let g = montecarlo::enumerate_gamma(alpha, t, k, work_bound).map_err(to_py_err)?;
    Ok((g.numer().to_string(), g.denom().to_string()))
}

/// Stochastic gamma_k estimate; returns (estimate, std_error, z_score).
#[pyfunction]
#[pyo3(signature = (alpha, t, k, trials = 100_000, seed = 0))]
fn estimate_gamma(alpha: u32, t: u32, k: u32, trials: u64, seed: u64) -> PyResult<(f64, f64, f64)> {
    let r = montecarlo::estimate_gamma(alpha, t, k, trials, seed, None).map_err(to_py_err)?;
    Ok((r.estimate, r.std_error, r.z_score.unwrap()))
}

#[pymodule]
fn _tilecov(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(gamma_k, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_k_float, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient_baseline, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient_tiled, m)?)?;
    m.add_function(wrap_pyfunction!(sufficient_n, m)?)?;
    m.add_function(wrap_pyfunction!(paper_table, m)?)?;
    m.add_function(wrap_pyfunction!(sample_array, m)?)?;
    m.add_function(wrap_pyfunction!(is_covering, m)?)?;
    m.add_function(wrap_pyfunction!(missing_tuples, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_gamma, m)?)?;
    Ok(())
}
