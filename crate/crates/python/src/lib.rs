use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use engine::model::{residual as model_residual, superfields, ModelParams};
use engine::print::gexpr_string;
use engine::salg::{algebra_params, catalog_records, graded_bracket, Element};
use engine::solutions::{reduce as reduce_system, reduction_spec};
use engine::verify::{self, check_gamma, GammaMode, Record};

fn err(e: engine::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn setup() {
    superfields();
    algebra_params();
}

fn params(gamma: Option<i64>) -> PyResult<ModelParams> {
    match gamma {
        Some(g) => {
            check_gamma(g).map_err(err)?;
            ModelParams::with_gamma(g).map_err(err)
        }
        None => Ok(ModelParams::symbolic()),
    }
}

/// Parse an expression and return its normal form as text.
#[pyfunction]
fn normalize(expr: &str) -> PyResult<String> {
    setup();
    engine::parse_expr(expr).map(|e| gexpr_string(&e)).map_err(err)
}

/// Residual `(Delta1, Delta2)` of the superfields `w`, `p`.
#[pyfunction]
#[pyo3(signature = (w, p, gamma=None))]
fn residual(w: &str, p: &str, gamma: Option<i64>) -> PyResult<(String, String)> {
    setup();
    let w = engine::parse_expr(w).map_err(err)?;
    let p = engine::parse_expr(p).map_err(err)?;
    let r = model_residual(&w, &p, &params(gamma)?).map_err(err)?;
    Ok((gexpr_string(&r.delta1), gexpr_string(&r.delta2)))
}

/// Graded bracket of two algebra elements such as `"L1 + eta*Q1"`.
#[pyfunction]
fn bracket(a: &str, b: &str) -> PyResult<String> {
    setup();
    let a = Element::parse(a).map_err(err)?;
    let b = Element::parse(b).map_err(err)?;
    graded_bracket(&a, &b).map(|e| e.to_string()).map_err(err)
}

/// `(id, generator, constraint)` for each one-dimensional subalgebra.
#[pyfunction]
fn catalog() -> PyResult<Vec<(String, String, String)>> {
    Ok(catalog_records()
        .map_err(err)?
        .into_iter()
        .map(|r| (r.id, r.generator, r.constraint))
        .collect())
}

/// Reduced system of a subalgebra as `(Delta1, Delta2)`.
#[pyfunction]
#[pyo3(signature = (id, gamma=None, k=None))]
fn reduce(id: &str, gamma: Option<i64>, k: Option<i64>) -> PyResult<(String, String)> {
    if let Some(g) = gamma {
        check_gamma(g).map_err(err)?;
    }
    let spec = reduction_spec(id).map_err(err)?;
    let s = reduce_system(&spec, gamma, k).map_err(err)?;
    Ok((gexpr_string(&s.residual.delta1), gexpr_string(&s.residual.delta2)))
}

/// Run a check group; returns `(check, anchor, status, detail)` records.
#[pyfunction]
#[pyo3(signature = (group, gamma=None))]
fn run_checks(py: Python<'_>, group: &str, gamma: Option<i64>) -> PyResult<Vec<(String, String, String, Vec<String>)>> {
    if let Some(g) = gamma {
        check_gamma(g).map_err(err)?;
    }
    let group = group.to_string();
    let records: Vec<Record> = py
        .detach(move || match group.as_str() {
            "core" => verify::core(verify::KERNEL_CASES),
            "operators" => verify::operators(verify::OPERATOR_CASES),
            "table1" => verify::table(),
            "prolongation" => verify::prolongation(),
            "symmetries" => match gamma {
                Some(g) => verify::symmetries(&[GammaMode::Sampled(g)]),
                None => verify::symmetries(&verify::DEFAULT_MODES),
            },
            "classification" => verify::classification(),
            "reductions" => verify::reductions(),
            "solutions" => verify::solutions(None),
            "all" => verify::all(),
            other => Err(engine::Error::Invalid(format!("unknown check group `{other}`"))),
        })
        .map_err(err)?;
    let mut records = records;
    records.sort_by(|a, b| a.check.cmp(&b.check));
    Ok(records
        .into_iter()
        .map(|r| (r.check, r.anchor, r.status.to_string(), r.detail))
        .collect())
}

#[pymodule]
fn supergas(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(residual, m)?)?;
    m.add_function(wrap_pyfunction!(bracket, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(run_checks, m)?)?;
    Ok(())
}
