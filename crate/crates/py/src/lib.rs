//! Python bindings. Structured results cross the boundary as JSON text.

use pyo3::exceptions::{PyNotImplementedError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use selfdual::analysis::{CodeRecord, InfoSetFamily, InvariantOptions};
use selfdual::cyclic_field::FieldContext;
use selfdual::decomposition::{build_code, ConstructionParams};
use selfdual::gf2::{BitMatrix, Permutation};
use selfdual::search::{run_search, SearchPlan};
use selfdual::shadow_theory::{enumerator_family, nonexistence_verdict, LengthShape, Pin, ShadowClass};
use selfdual::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::UnsupportedCase(_) | Error::NotApplicable(_) | Error::NeedsMoreConstraints(_) => {
            PyNotImplementedError::new_err(e.to_string())
        }
        Error::ConstructionBug(_) | Error::Io(_) | Error::Json(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn options(extra_weights: usize, shadow_w_max: Option<usize>, intersections: bool) -> InvariantOptions {
    InvariantOptions { extra_weights, shadow_w_max, intersections, ..InvariantOptions::default() }
}

/// Builds a code and returns its invariant record as JSON.
#[pyfunction]
#[pyo3(signature = (p, f, u, v, s="I", fixed_gen=None, extra_weights=2, shadow_w_max=None, intersections=true))]
#[allow(clippy::too_many_arguments)]
fn construct(
    py: Python<'_>,
    p: usize,
    f: usize,
    u: [u64; 3],
    v: (u64, u64),
    s: &str,
    fixed_gen: Option<String>,
    extra_weights: usize,
    shadow_w_max: Option<usize>,
    intersections: bool,
) -> PyResult<String> {
    let s = Permutation::from_cycles(4, s).map_err(to_py)?;
    let mut params = ConstructionParams::new(p, f, u, v, s).map_err(to_py)?;
    if let Some(id) = fixed_gen {
        params.fixed_gen_id = id;
    }
    let opts = options(extra_weights, shadow_w_max, intersections);
    py.allow_threads(|| {
        let ctx = match FieldContext::reference(p) {
            Some(ctx) => ctx,
            None => FieldContext::for_prime(p)?,
        };
        let gen = build_code(&ctx, &params)?;
        CodeRecord::compute(&gen, Some(params), &opts)?.to_json()
    })
    .map_err(to_py)
}

/// Invariant record of a matrix given in the text format.
#[pyfunction]
#[pyo3(signature = (matrix, params=None, extra_weights=2, shadow_w_max=None, intersections=true))]
fn analyze(
    py: Python<'_>,
    matrix: &str,
    params: Option<&str>,
    extra_weights: usize,
    shadow_w_max: Option<usize>,
    intersections: bool,
) -> PyResult<String> {
    let gen = BitMatrix::from_text(matrix).map_err(to_py)?;
    let params = params.map(str::parse::<ConstructionParams>).transpose().map_err(to_py)?;
    let opts = options(extra_weights, shadow_w_max, intersections);
    py.allow_threads(|| CodeRecord::compute(&gen, params, &opts)?.to_json()).map_err(to_py)
}

/// `(d, proven)` for a matrix in the text format.
#[pyfunction]
#[pyo3(signature = (matrix, max_info_weight=usize::MAX))]
fn min_distance(py: Python<'_>, matrix: &str, max_info_weight: usize) -> PyResult<(usize, bool)> {
    let gen = BitMatrix::from_text(matrix).map_err(to_py)?;
    py.allow_threads(|| Ok(InfoSetFamily::new(&gen)?.min_distance(max_info_weight))).map_err(to_py)
}

#[pyfunction]
fn feasible_types(n: usize, d: usize, p: usize) -> PyResult<Vec<String>> {
    let types = selfdual::decomposition::feasible_types(n, d, p).map_err(to_py)?;
    Ok(types.iter().map(|t| t.to_string()).collect())
}

/// Nonexistence certificate as JSON.
#[pyfunction]
fn certify(n: usize, class: &str) -> PyResult<String> {
    let class = ShadowClass::parse(n, class).map_err(to_py)?;
    let cert = nonexistence_verdict(&class).map_err(to_py)?;
    serde_json::to_string(&cert).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Weight enumerator family under pins such as `"B7=alpha"`, as JSON.
#[pyfunction]
#[pyo3(signature = (n, d, pins=Vec::new()))]
fn gleason(n: usize, d: usize, pins: Vec<String>) -> PyResult<String> {
    let pins: Vec<Pin> = pins.iter().map(|p| p.parse()).collect::<Result<_, _>>().map_err(to_py)?;
    let shape = LengthShape::new(n).map_err(to_py)?;
    let fam = enumerator_family(shape, d, &pins).map_err(to_py)?;
    serde_json::to_string(&fam).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Runs a search plan (the `key = value` text) and returns one JSON record
/// per distinct code.
#[pyfunction]
fn search(py: Python<'_>, plan: &str) -> PyResult<Vec<String>> {
    let plan = SearchPlan::from_text(plan).map_err(to_py)?;
    let store = py.allow_threads(|| run_search(&plan, None)).map_err(to_py)?;
    store.codes.iter().map(|c| c.record.to_json().map_err(to_py)).collect()
}

#[pymodule]
fn selfdual_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(min_distance, m)?)?;
    m.add_function(wrap_pyfunction!(feasible_types, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(gleason, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    Ok(())
}
