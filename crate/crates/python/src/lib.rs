//! Python bindings. Polynomials are passed as strings in either input form
//! ("x^3-1" or "1,0,0,1"); structured results come back as dicts built from
//! the same JSON records the CLI prints.

use cisforge_core::asymptotics;
use cisforge_core::enumeration::count_report;
use cisforge_core::field::field_of_size;
use cisforge_core::parse::{parse_elem, parse_poly};
use cisforge_core::search::{self, SearchJob, TableId, TableOptions};
use cisforge_core::z4;
use cisforge_core::{Field, GeneratorSpec, LinearCode, Poly, QuotientRing};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn field(q: u64) -> PyResult<Field> {
    field_of_size(q).map_err(value_err)
}

fn poly(f: &Field, text: &str) -> PyResult<Poly> {
    parse_poly(f, text).map_err(value_err)
}

/// Converts a serializable record to a Python object through `json.loads`.
fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(value_err)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// One-generator code `<(1, a_1, ..., a_{t-1})>` over `F_q[x]/(h)`.
#[pyclass(frozen)]
struct Code {
    spec: GeneratorSpec,
    code: LinearCode,
}

#[pymethods]
impl Code {
    #[new]
    fn new(q: u64, h: &str, t: usize, a: Vec<String>) -> PyResult<Self> {
        let f = field(q)?;
        let ring = QuotientRing::new(&poly(&f, h)?).map_err(value_err)?;
        let gens = a
            .iter()
            .map(|g| ring.element(&poly(&f, g)?).map_err(value_err))
            .collect::<PyResult<Vec<_>>>()?;
        let spec = GeneratorSpec::new(&ring, t, gens).map_err(value_err)?;
        let code = spec.build_code();
        Ok(Code { spec, code })
    }

    #[getter]
    fn length(&self) -> usize {
        self.code.length()
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.code.dimension()
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.spec.ring().family().label()
    }

    fn is_cis(&self) -> bool {
        self.spec.is_cis()
    }

    fn is_cis_by_rank(&self) -> bool {
        self.spec.is_cis_by_rank()
    }

    fn min_distance(&self) -> PyResult<usize> {
        self.spec.min_distance().map_err(value_err)
    }

    fn generator_matrix(&self) -> Vec<Vec<u32>> {
        self.code.gen_matrix().to_rows()
    }

    fn encode(&self, message: Vec<u32>) -> PyResult<Vec<u32>> {
        self.code.encode(&message).map_err(value_err)
    }

    fn to_dict(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.spec.to_record(None))
    }

    fn __repr__(&self) -> String {
        format!("Code({})", self.spec)
    }
}

/// Best code for `h`: `mode` is "exhaustive" or "random".
#[pyfunction]
#[pyo3(signature = (q, t, h, mode = "exhaustive", seed = 0, budget = search::RANDOM_BUDGET, target = None))]
fn search_codes(py: Python<'_>, q: u64, t: usize, h: &str, mode: &str, seed: u64, budget: u64, target: Option<usize>) -> PyResult<Py<PyAny>> {
    let f = field(q)?;
    let ring = QuotientRing::new(&poly(&f, h)?).map_err(value_err)?;
    let job = match mode {
        "exhaustive" => SearchJob::exhaustive(&ring, t),
        "random" => SearchJob::random(&ring, t, seed, budget),
        other => return Err(PyValueError::new_err(format!("unknown mode '{other}'"))),
    };
    let rep = py.detach(|| job.with_target(target).run()).map_err(value_err)?;
    to_py(py, &rep.record())
}

/// Rows of a distance table, as dicts.
#[pyfunction]
#[pyo3(signature = (name, seed = 0, ns = None, budget = search::RANDOM_BUDGET))]
fn table(py: Python<'_>, name: &str, seed: u64, ns: Option<Vec<usize>>, budget: u64) -> PyResult<Py<PyAny>> {
    let id = TableId::parse(name).map_err(value_err)?;
    let options = TableOptions { seed, ns, random_budget: budget, ..TableOptions::default() };
    let rows = py.detach(|| search::reproduce_table(id, &options)).map_err(value_err)?;
    let records: Vec<_> = rows.iter().map(|r| r.record(id)).collect();
    to_py(py, &records)
}

/// Formula count of t-CIS codes for `h`, with the exhaustive oracle if asked.
#[pyfunction]
#[pyo3(signature = (q, t, h, oracle = false))]
fn count(py: Python<'_>, q: u64, t: usize, h: &str, oracle: bool) -> PyResult<Py<PyAny>> {
    let f = field(q)?;
    let rep = count_report(q, t, &poly(&f, h)?, oracle).map_err(value_err)?;
    to_py(py, &rep)
}

#[pyfunction]
fn entropy(q: u64, y: f64) -> PyResult<f64> {
    asymptotics::entropy_q(q, y).map_err(value_err)
}

#[pyfunction]
fn gv_delta(q: u64, t: usize, r: usize) -> PyResult<f64> {
    asymptotics::gv_delta(q, t, r).map_err(value_err)
}

/// Irreducible factors of `h` as `(text, multiplicity)`.
#[pyfunction]
fn factor(q: u64, h: &str) -> PyResult<Vec<(String, usize)>> {
    let f = field(q)?;
    let fac = poly(&f, h)?.factorize().map_err(value_err)?;
    Ok(fac.factors.iter().map(|(p, m)| (p.to_string(), *m)).collect())
}

/// Index of a field element written as an index or an expression in `w`.
#[pyfunction]
fn element(q: u64, text: &str) -> PyResult<u32> {
    parse_elem(&field(q)?, text).map_err(value_err)
}

#[pyfunction]
fn z4_count(py: Python<'_>, n: usize, t: usize) -> PyResult<Py<PyAny>> {
    let rep = z4::count_cis_z4(n, t).map_err(value_err)?;
    to_py(py, &rep)
}

#[pyfunction]
#[pyo3(signature = (n, t, seed = 0, budget = 100, target = None))]
fn z4_search(py: Python<'_>, n: usize, t: usize, seed: u64, budget: u64, target: Option<usize>) -> PyResult<Py<PyAny>> {
    let rep = py.detach(|| z4::z4_search(n, t, seed, budget, target)).map_err(value_err)?;
    to_py(py, &rep.record())
}

#[pyfunction]
fn gray_map(v: Vec<u8>) -> Vec<u32> {
    // a Vec<u8> would come back as bytes
    z4::gray_map(&v).into_iter().map(u32::from).collect()
}

#[pyfunction]
fn lee_weight(v: Vec<u8>) -> usize {
    z4::lee_weight(&v)
}

#[pymodule]
fn cisforge(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Code>()?;
    m.add_function(wrap_pyfunction!(search_codes, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(gv_delta, m)?)?;
    m.add_function(wrap_pyfunction!(factor, m)?)?;
    m.add_function(wrap_pyfunction!(element, m)?)?;
    m.add_function(wrap_pyfunction!(z4_count, m)?)?;
    m.add_function(wrap_pyfunction!(z4_search, m)?)?;
    m.add_function(wrap_pyfunction!(gray_map, m)?)?;
    m.add_function(wrap_pyfunction!(lee_weight, m)?)?;
    Ok(())
}
