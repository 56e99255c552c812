use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;
use torsionlab::bounds::BoundRequest;
use torsionlab::ingest::{self, Format, GroupResolver, IngestError, Strictness};
use torsionlab::perm::{self, EnumerationMode, PermGroup, Permutation, TransitiveTable};
use torsionlab::{counting, quadforms};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Structured results cross the boundary as plain dicts and lists.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn load_group(spec: &str, degree: Option<usize>) -> PyResult<PermGroup> {
    let spec = spec.trim();
    if perm::parse_label(spec).is_some() {
        let table = TransitiveTable::load().map_err(value_err)?;
        table.group(spec).map_err(value_err)
    } else {
        PermGroup::parse(spec, degree).map_err(value_err)
    }
}

/// Evaluates a bound request given as a dict, e.g.
/// `{"formula": "cyclic-rank", "ell": 3, "places": {"finite": 4, "infinite": 0}, "rk_f": 1}`.
#[pyfunction]
fn bound<'py>(py: Python<'py>, request: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let text: String = py.import("json")?.call_method1("dumps", (request,))?.extract()?;
    let req: BoundRequest = serde_json::from_str(&text).map_err(value_err)?;
    let report = req.evaluate().map_err(value_err)?;
    to_py(py, &report)
}

/// `ind(g)`: degree minus number of cycles.
#[pyfunction]
#[pyo3(signature = (perm, degree=None))]
fn ind(perm: &str, degree: Option<usize>) -> PyResult<usize> {
    Ok(Permutation::parse(perm, degree).map_err(value_err)?.ind())
}

#[pyfunction]
#[pyo3(signature = (group, degree=None))]
fn group_info<'py>(py: Python<'py>, group: &str, degree: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
    let g = load_group(group, degree)?;
    let info = serde_json::json!({
        "degree": g.degree(),
        "order": g.order().map_err(value_err)?,
        "transitive": g.is_transitive(),
        "nilpotent": g.is_nilpotent().map_err(value_err)?,
        "a": g.min_index().map_err(value_err)?,
    });
    to_py(py, &info)
}

/// deg/ind check over allowable subgroups of `G^k`.
#[pyfunction]
#[pyo3(signature = (group, k, symmetry=true, degree=None))]
fn check_deg_ind<'py>(
    py: Python<'py>,
    group: &str,
    k: usize,
    symmetry: bool,
    degree: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let g = load_group(group, degree)?;
    let mode = if symmetry {
        EnumerationMode::UpToSymmetry
    } else {
        EnumerationMode::Literal
    };
    let report = perm::check_deg_ind(&g, k, mode).map_err(value_err)?;
    to_py(py, &report)
}

/// Invariants `[d_1, ..., d_m]` with `d_i | d_{i+1}` of `Cl(D)`.
#[pyfunction]
fn class_group(d: i64) -> PyResult<Vec<u64>> {
    Ok(quadforms::class_group(d).map_err(value_err)?.invariants().to_vec())
}

#[pyfunction]
fn genus_check<'py>(py: Python<'py>, d: i64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &quadforms::genus_check(d).map_err(value_err)?)
}

#[pyfunction]
fn afull_count(a: u32, x: u64) -> PyResult<u64> {
    counting::afull_count(a, x).map_err(value_err)
}

#[pyfunction]
fn afull_asymptotic<'py>(py: Python<'py>, a: u32, x: u64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &counting::verify_afull_asymptotic(a, x).map_err(value_err)?)
}

/// `g(1/a)` to within `tolerance`.
#[pyfunction]
#[pyo3(signature = (a, tolerance=1e-12))]
fn euler_constant(a: u32, tolerance: f64) -> PyResult<f64> {
    Ok(counting::euler_constant_g(a, tolerance).map_err(value_err)?.value)
}

/// `[(D, a_D), ...]` for one group key of a JSONL or CSV field list.
#[pyfunction]
#[pyo3(signature = (path, group="2T1", strict=false))]
fn census(path: PathBuf, group: &str, strict: bool) -> PyResult<Vec<(u64, u64)>> {
    let strictness = if strict {
        Strictness::Strict
    } else {
        Strictness::Lenient
    };
    let mut resolver = GroupResolver::from_env().map_err(value_err)?;
    let (ds, _) = ingest::parse(&path, Format::from_path(&path), strictness, &mut resolver).map_err(|e| match e {
        IngestError::Io { .. } => PyIOError::new_err(e.to_string()),
        e => value_err(e),
    })?;
    Ok(ingest::to_census(&ds, group).pairs().to_vec())
}

#[pymodule]
#[pyo3(name = "torsionlab")]
fn torsionlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(bound, m)?)?;
    m.add_function(wrap_pyfunction!(ind, m)?)?;
    m.add_function(wrap_pyfunction!(group_info, m)?)?;
    m.add_function(wrap_pyfunction!(check_deg_ind, m)?)?;
    m.add_function(wrap_pyfunction!(class_group, m)?)?;
    m.add_function(wrap_pyfunction!(genus_check, m)?)?;
    m.add_function(wrap_pyfunction!(afull_count, m)?)?;
    m.add_function(wrap_pyfunction!(afull_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(euler_constant, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
