//! Python bindings: `Group`, `Complex` and `Map` wrap the core types; the
//! free functions expose normal forms, factorizations, lifting and the
//! randomized axiom suite.

use num_bigint::BigInt;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use zchain::abelian::FgAbGroup;
use zchain::cli::{CliError, ComplexDocument, MapDocument};
use zchain::complexes::{tensor, ChainComplex, ChainMap};
use zchain::factor::{factor_acf_fib, factor_cof_afb, gamma as gamma_of};
use zchain::intlinalg::{snf as snf_of, IntMatrix};
use zchain::lifting::{solve_lift, LiftProblem};
use zchain::modelcls::classify;
use zchain::pushout::pushout_product as pushout_product_of;
use zchain::random::GenConfig;
use zchain::verify::{run_all, VerifyConfig};

pyo3::create_exception!(pyzchain, ZchainError, pyo3::exceptions::PyException);

fn err(e: zchain::Error) -> PyErr {
    ZchainError::new_err(e.to_string())
}

fn cli_err(e: CliError) -> PyErr {
    match e {
        CliError::Input(v) | CliError::Math(v) => ZchainError::new_err(v.to_string()),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    ZchainError::new_err(format!("invalid JSON: {e}"))
}

/// Builds an `rows × cols` matrix from nested rows, checking the shape.
fn to_matrix(data: &[Vec<BigInt>], rows: usize, cols: usize) -> Result<IntMatrix, String> {
    if data.len() != rows && !(rows == 0 && data.is_empty()) {
        return Err(format!("expected {rows} rows, got {}", data.len()));
    }
    if let Some(r) = data.iter().position(|r| r.len() != cols) {
        return Err(format!("row {r} has {} entries, expected {cols}", data[r].len()));
    }
    Ok(IntMatrix::from_vec(rows, cols, data.iter().flatten().cloned().collect()))
}

fn from_matrix(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    m.row_vectors()
}

fn shape_err(msg: String) -> PyErr {
    ZchainError::new_err(msg)
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(xs) => {
            let items = xs.iter().map(|x| to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any()
        }
        Value::Object(map) => {
            let d = PyDict::new(py);
            for (k, x) in map {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn serialize<'py, T: serde::Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(x).map_err(json_err)?)
}

/// A finitely generated abelian group `Z^n / (relations)`.
#[pyclass(name = "Group", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyGroup {
    inner: FgAbGroup,
}

#[pymethods]
impl PyGroup {
    /// `relations` is an `n × k` matrix whose columns are the relations.
    #[new]
    #[pyo3(signature = (generators, relations = None))]
    fn new(generators: usize, relations: Option<Vec<Vec<BigInt>>>) -> PyResult<Self> {
        let rel = match relations {
            None => IntMatrix::zeros(generators, 0),
            Some(r) => {
                let cols = r.first().map_or(0, Vec::len);
                to_matrix(&r, generators, cols).map_err(shape_err)?
            }
        };
        FgAbGroup::new(generators, rel).map(|inner| PyGroup { inner }).map_err(err)
    }

    #[staticmethod]
    fn cyclic(order: i64) -> Self {
        PyGroup { inner: FgAbGroup::cyclic(order) }
    }

    #[staticmethod]
    fn free(rank: usize) -> Self {
        PyGroup { inner: FgAbGroup::free(rank) }
    }

    #[getter]
    fn generators(&self) -> usize {
        self.inner.ngens()
    }

    #[getter]
    fn relations(&self) -> Vec<Vec<BigInt>> {
        from_matrix(self.inner.relations())
    }

    /// `None` for infinite groups.
    fn order(&self) -> Option<BigInt> {
        self.inner.order()
    }

    fn invariant_factors(&self) -> Vec<BigInt> {
        self.inner.invariant_factors().to_vec()
    }

    fn free_rank(&self) -> usize {
        self.inner.free_rank()
    }

    fn is_trivial(&self) -> bool {
        self.inner.is_trivial()
    }

    fn is_isomorphic(&self, other: &PyGroup) -> bool {
        self.inner.is_isomorphic(&other.inner)
    }

    fn __repr__(&self) -> String {
        format!("Group({})", self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// A bounded chain complex `d_n: C_n → C_{n−1}`.
#[pyclass(name = "Complex", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyComplex {
    inner: ChainComplex,
}

#[pymethods]
impl PyComplex {
    /// `groups[k]` sits in degree `lo + k`; `differentials[k]` is `d_{lo+k+1}`.
    #[new]
    #[pyo3(signature = (lo, groups, differentials = Vec::new()))]
    fn new(lo: i32, groups: Vec<PyGroup>, differentials: Vec<Vec<Vec<BigInt>>>) -> PyResult<Self> {
        let groups: Vec<FgAbGroup> = groups.into_iter().map(|g| g.inner).collect();
        if differentials.len() + 1 != groups.len() && !(groups.is_empty() && differentials.is_empty()) {
            return Err(shape_err(format!(
                "{} groups need {} differentials, got {}",
                groups.len(),
                groups.len().saturating_sub(1),
                differentials.len()
            )));
        }
        let diffs = differentials
            .iter()
            .enumerate()
            .map(|(k, d)| to_matrix(d, groups[k].ngens(), groups[k + 1].ngens()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(shape_err)?;
        ChainComplex::new(lo, groups, diffs).map(|inner| PyComplex { inner }).map_err(err)
    }

    #[staticmethod]
    fn sphere(n: i32, group: &PyGroup) -> Self {
        PyComplex { inner: ChainComplex::sphere(n, &group.inner) }
    }

    #[staticmethod]
    fn disk(n: i32, group: &PyGroup) -> Self {
        PyComplex { inner: ChainComplex::disk(n, &group.inner) }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc: ComplexDocument = serde_json::from_str(text).map_err(json_err)?;
        doc.to_complex().map(|inner| PyComplex { inner }).map_err(cli_err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&ComplexDocument::from_complex(&self.inner)).map_err(json_err)
    }

    /// `(lo, hi)` or `None` for the zero complex.
    fn support(&self) -> Option<(i32, i32)> {
        self.inner.support()
    }

    fn group(&self, n: i32) -> PyGroup {
        PyGroup { inner: self.inner.group(n) }
    }

    fn differential(&self, n: i32) -> Vec<Vec<BigInt>> {
        from_matrix(self.inner.diff(n).matrix())
    }

    fn homology(&self, n: i32) -> PyGroup {
        PyGroup { inner: self.inner.homology(n).group }
    }

    fn is_acyclic(&self) -> bool {
        self.inner.is_acyclic()
    }

    fn is_degreewise_free(&self) -> bool {
        self.inner.is_degreewise_free()
    }

    fn suspend(&self, k: i32) -> Self {
        PyComplex { inner: self.inner.suspend(k) }
    }

    fn tensor(&self, other: &PyComplex) -> Self {
        PyComplex { inner: tensor(&self.inner, &other.inner) }
    }

    fn __repr__(&self) -> String {
        match self.inner.support() {
            None => "Complex(0)".into(),
            Some((lo, hi)) => {
                let parts: Vec<String> = (lo..=hi).map(|n| format!("{n}: {}", self.inner.group(n))).collect();
                format!("Complex({})", parts.join(", "))
            }
        }
    }
}

/// A chain map between bounded complexes.
#[pyclass(name = "Map", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyMap {
    inner: ChainMap,
}

#[pymethods]
impl PyMap {
    /// `components[k]` is `f_{lo+k}` over the source support.
    #[new]
    fn new(source: &PyComplex, target: &PyComplex, components: Vec<Vec<Vec<BigInt>>>) -> PyResult<Self> {
        let (a, b) = (&source.inner, &target.inner);
        let lo = a.lo();
        let comps = components
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let n = lo + k as i32;
                to_matrix(m, b.ngens(n), a.ngens(n))
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(shape_err)?;
        ChainMap::new(a, b, comps).map(|inner| PyMap { inner }).map_err(err)
    }

    #[staticmethod]
    fn identity(c: &PyComplex) -> Self {
        PyMap { inner: ChainMap::identity(&c.inner) }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc: MapDocument = serde_json::from_str(text).map_err(json_err)?;
        doc.to_map().map(|inner| PyMap { inner }).map_err(cli_err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&MapDocument::from_map(&self.inner)).map_err(json_err)
    }

    #[getter]
    fn source(&self) -> PyComplex {
        PyComplex { inner: self.inner.src().clone() }
    }

    #[getter]
    fn target(&self) -> PyComplex {
        PyComplex { inner: self.inner.dst().clone() }
    }

    fn component(&self, n: i32) -> Vec<Vec<BigInt>> {
        from_matrix(self.inner.component(n).matrix())
    }

    /// `self ∘ other`.
    fn compose(&self, other: &PyMap) -> PyResult<Self> {
        if other.inner.dst() != self.inner.src() {
            return Err(shape_err("maps are not composable".into()));
        }
        Ok(PyMap { inner: self.inner.compose(&other.inner) })
    }

    fn equals(&self, other: &PyMap) -> bool {
        self.inner.src() == other.inner.src() && self.inner.dst() == other.inner.dst() && self.inner.equals(&other.inner)
    }

    fn is_quasi_iso(&self) -> bool {
        self.inner.is_quasi_iso()
    }

    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        serialize(py, &classify(&self.inner))
    }

    /// `mode` is `"cof-afb"` or `"acf-fib"`; returns `(left, middle, right)`.
    fn factor(&self, mode: &str) -> PyResult<(PyMap, PyComplex, PyMap)> {
        let f = match mode {
            "cof-afb" | "cof-acf" => factor_cof_afb(&self.inner),
            "acf-fib" => factor_acf_fib(&self.inner),
            _ => return Err(ZchainError::new_err(format!("unknown mode {mode:?}"))),
        }
        .map_err(err)?;
        Ok((PyMap { inner: f.left }, PyComplex { inner: f.middle }, PyMap { inner: f.right }))
    }
}

/// Smith form `U·A·V = D` of a `rows × cols` matrix.
#[pyfunction]
#[pyo3(signature = (matrix, cols = None))]
fn snf<'py>(py: Python<'py>, matrix: Vec<Vec<BigInt>>, cols: Option<usize>) -> PyResult<Bound<'py, PyDict>> {
    let c = cols.unwrap_or_else(|| matrix.first().map_or(0, Vec::len));
    let m = to_matrix(&matrix, matrix.len(), c).map_err(shape_err)?;
    let s = snf_of(&m);
    let d = PyDict::new(py);
    d.set_item("d", from_matrix(&s.d))?;
    d.set_item("u", from_matrix(&s.u))?;
    d.set_item("v", from_matrix(&s.v))?;
    d.set_item("rank", s.rank)?;
    d.set_item("invariant_factors", s.diagonal())?;
    Ok(d)
}

/// The free replacement `p: Γ(B) → B`.
#[pyfunction]
fn gamma(b: &PyComplex) -> PyResult<PyMap> {
    gamma_of(&b.inner).map(|g| PyMap { inner: g.p }).map_err(err)
}

/// A diagonal `h` with `q h = g` and `h i = f`.
#[pyfunction]
fn lift(i: &PyMap, q: &PyMap, f: &PyMap, g: &PyMap) -> PyResult<PyMap> {
    let p = LiftProblem::new(i.inner.clone(), q.inner.clone(), f.inner.clone(), g.inner.clone()).map_err(err)?;
    solve_lift(&p).map(|l| PyMap { inner: l.h }).map_err(err)
}

/// The pushout-product `k: P → B ⊗ D` of two cofibrations, with its certificate flags.
#[pyfunction]
fn pushout_product<'py>(py: Python<'py>, i: &PyMap, j: &PyMap) -> PyResult<(PyMap, Bound<'py, PyDict>)> {
    let cert = pushout_product_of(&i.inner, &j.inner).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("holds", cert.holds())?;
    d.set_item("k_injective", cert.k_injective)?;
    d.set_item("m_iso", cert.m_iso)?;
    d.set_item("acyclic_factor", cert.acyclic_factor)?;
    d.set_item("labels", serialize(py, &cert.k_class.labels)?)?;
    Ok((PyMap { inner: cert.k }, d))
}

/// Runs the randomized axiom suite; the report is a dict.
#[pyfunction]
#[pyo3(signature = (seed = 1, cases = 10, max_order = 16))]
fn verify<'py>(py: Python<'py>, seed: u64, cases: usize, max_order: u64) -> PyResult<Bound<'py, PyAny>> {
    let cfg = VerifyConfig { seed, cases, gen: GenConfig { max_order, ..GenConfig::default() } };
    let report = py.detach(|| run_all(&cfg));
    serialize(py, &report)
}

#[pymodule]
fn pyzchain(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ZchainError", m.py().get_type::<ZchainError>())?;
    m.add_class::<PyGroup>()?;
    m.add_class::<PyComplex>()?;
    m.add_class::<PyMap>()?;
    m.add_function(wrap_pyfunction!(snf, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(lift, m)?)?;
    m.add_function(wrap_pyfunction!(pushout_product, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
