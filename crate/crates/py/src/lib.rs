//! Python bindings: `import fqtnn`.

use std::sync::Arc;

use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use fqtnn::closed_forms;
use fqtnn::field::FieldSpec;
use fqtnn::grassmannian::{self, CountTable, Enumerator, Filter, GrassmannianError, DEFAULT_WORK_CAP};
use fqtnn::matrix::{IndexSet, MatrixFq};
use fqtnn::structures::{self, PositroidMode, StructureError};
use fqtnn::verify::{self, Suite, VerifyOptions};

create_exception!(fqtnn, WorkCapExceeded, PyRuntimeError);

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn grass_err(e: GrassmannianError) -> PyErr {
    match e {
        GrassmannianError::WorkCapExceeded { .. } => WorkCapExceeded::new_err(e.to_string()),
        _ => value_err(e),
    }
}

fn struct_err(e: StructureError) -> PyErr {
    match e {
        StructureError::Grassmannian(g) => grass_err(g),
        _ => value_err(e),
    }
}

fn parse_filter(s: &str) -> PyResult<Filter> {
    s.parse().map_err(value_err)
}

/// A finite field F_q, q = p^r. Elements are integer codes in 0..q.
#[pyclass(name = "Field", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyField {
    spec: Arc<FieldSpec>,
}

impl PyField {
    fn code(&self, a: u64) -> PyResult<u32> {
        self.spec.check_code(a).map_err(value_err)
    }
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (p, r = 1, modulus = None))]
    fn new(p: u32, r: u32, modulus: Option<Vec<u32>>) -> PyResult<Self> {
        let spec = match modulus {
            None => FieldSpec::new(p, r),
            Some(m) => {
                if m.len() as u32 != r + 1 {
                    return Err(PyValueError::new_err("modulus degree must equal r"));
                }
                FieldSpec::with_modulus(p, m)
            }
        }
        .map_err(value_err)?;
        Ok(PyField { spec })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.spec.characteristic()
    }

    #[getter]
    fn r(&self) -> u32 {
        self.spec.degree()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.spec.order()
    }

    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.spec.modulus().to_vec()
    }

    #[getter]
    fn primitive_root(&self) -> u32 {
        self.spec.primitive_root_code()
    }

    /// "negative", "zero" or "positive".
    fn sign(&self, a: u64) -> PyResult<&'static str> {
        Ok(match self.spec.sign(self.code(a)?) {
            fqtnn::Sign::Negative => "negative",
            fqtnn::Sign::Zero => "zero",
            fqtnn::Sign::Positive => "positive",
        })
    }

    fn add(&self, a: u64, b: u64) -> PyResult<u32> {
        Ok(self.spec.add(self.code(a)?, self.code(b)?))
    }

    fn sub(&self, a: u64, b: u64) -> PyResult<u32> {
        Ok(self.spec.sub(self.code(a)?, self.code(b)?))
    }

    fn mul(&self, a: u64, b: u64) -> PyResult<u32> {
        Ok(self.spec.mul(self.code(a)?, self.code(b)?))
    }

    fn div(&self, a: u64, b: u64) -> PyResult<u32> {
        self.spec.div(self.code(a)?, self.code(b)?).map_err(value_err)
    }

    fn neg(&self, a: u64) -> PyResult<u32> {
        Ok(self.spec.neg(self.code(a)?))
    }

    fn inv(&self, a: u64) -> PyResult<u32> {
        self.spec.inv(self.code(a)?).map_err(value_err)
    }

    fn pow(&self, a: u64, e: u64) -> PyResult<u32> {
        Ok(self.spec.pow(self.code(a)?, e))
    }

    fn positives(&self) -> Vec<u32> {
        self.spec.positives()
    }

    fn negatives(&self) -> Vec<u32> {
        self.spec.negatives()
    }

    /// Coefficients of an element, constant term first.
    fn digits(&self, a: u64) -> PyResult<Vec<u32>> {
        Ok(self.spec.digits(self.code(a)?))
    }

    fn __repr__(&self) -> String {
        let m = self.spec.modulus();
        format!("Field(p={}, r={}, modulus={m:?})", self.p(), self.r())
    }
}

/// A point of Gr_{k,n}(F_q), stored in reduced row echelon form.
#[pyclass(name = "Subspace", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PySubspace {
    inner: grassmannian::Subspace,
}

fn wrap(inner: grassmannian::Subspace) -> PySubspace {
    PySubspace { inner }
}

#[pymethods]
impl PySubspace {
    /// Row span of `rows` (element codes). Must have full row rank.
    #[new]
    fn new(field: &PyField, rows: Vec<Vec<u64>>) -> PyResult<Self> {
        let k = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(PyValueError::new_err("rows have different lengths"));
        }
        let codes = rows
            .iter()
            .flatten()
            .map(|&c| field.code(c))
            .collect::<PyResult<Vec<u32>>>()?;
        let m = MatrixFq::from_codes(&field.spec, k, n, codes).map_err(value_err)?;
        grassmannian::Subspace::canonicalize(&m).map(wrap).map_err(grass_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(value_err)?;
        grassmannian::Subspace::from_json(&v).map(wrap).map_err(grass_err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField {
            spec: Arc::clone(self.inner.spec()),
        }
    }

    #[getter]
    fn rows(&self) -> Vec<Vec<u32>> {
        self.inner.matrix().to_rows()
    }

    /// Pivot columns, 1-based.
    #[getter]
    fn pivots(&self) -> Vec<usize> {
        self.inner.pivots().as_slice().to_vec()
    }

    /// `[(I, Δ_I)]` over k-subsets I (1-based) in colex order.
    fn plucker(&self) -> Vec<(Vec<usize>, u32)> {
        self.inner
            .plucker()
            .into_iter()
            .map(|(i, c)| (i.as_slice().to_vec(), c))
            .collect()
    }

    fn is_tnn(&self) -> bool {
        self.inner.is_tnn()
    }

    fn is_tp(&self) -> bool {
        self.inner.is_tp()
    }

    /// alt(V^perp), a point of Gr_{n-k,n}.
    fn dual(&self) -> Self {
        wrap(self.inner.dual())
    }

    fn cyclic_shift(&self) -> Self {
        wrap(structures::cyclic_shift(&self.inner))
    }

    /// Bases of the matroid, as sorted 1-based tuples.
    fn matroid(&self) -> Vec<Vec<usize>> {
        structures::matroid_of(&self.inner)
            .bases()
            .iter()
            .map(|b| b.as_slice().to_vec())
            .collect()
    }

    #[pyo3(signature = (vector_cap = structures::DEFAULT_VECTOR_CAP))]
    fn max_variation(&self, vector_cap: u64) -> PyResult<(usize, Vec<u32>)> {
        structures::max_variation(&self.inner, vector_cap).map_err(struct_err)
    }

    /// Entrywise image in an extension field F_{p^s}, s a multiple of 2r.
    fn lift(&self, target: &PyField) -> PyResult<Self> {
        grassmannian::lift(&self.inner, &target.spec).map(wrap).map_err(grass_err)
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.matrix().codes().hash(&mut h);
        self.inner.n().hash(&mut h);
        h.finish()
    }

    fn __repr__(&self) -> String {
        format!("Subspace({:?})", self.rows())
    }
}

fn enumerator(k: usize, n: usize, field: &PyField, filter: &str, work_cap: u64) -> PyResult<Enumerator> {
    Ok(Enumerator::new(k, n, &field.spec, parse_filter(filter)?)
        .map_err(grass_err)?
        .with_work_cap(work_cap))
}

/// Number of points of Gr_{k,n}(F_q) passing `filter` ("all", "tnn", "tp").
#[pyfunction]
#[pyo3(signature = (k, n, field, filter = "tnn", work_cap = DEFAULT_WORK_CAP))]
fn count(py: Python<'_>, k: usize, n: usize, field: &PyField, filter: &str, work_cap: u64) -> PyResult<BigUint> {
    let en = enumerator(k, n, field, filter, work_cap)?;
    py.detach(|| en.count()).map(|r| r.count).map_err(grass_err)
}

/// All points passing `filter`, in canonical enumeration order.
#[pyfunction]
#[pyo3(signature = (k, n, field, filter = "tnn", work_cap = DEFAULT_WORK_CAP))]
fn enumerate(
    py: Python<'_>,
    k: usize,
    n: usize,
    field: &PyField,
    filter: &str,
    work_cap: u64,
) -> PyResult<Vec<PySubspace>> {
    let en = enumerator(k, n, field, filter, work_cap)?;
    let pts = py.detach(|| en.collect()).map_err(grass_err)?;
    Ok(pts.into_iter().map(wrap).collect())
}

/// `table[n][k]` for 0 <= k <= n <= max_n.
#[pyfunction]
#[pyo3(signature = (field, max_n, filter = "tnn", work_cap = DEFAULT_WORK_CAP))]
fn count_table(
    py: Python<'_>,
    field: &PyField,
    max_n: usize,
    filter: &str,
    work_cap: u64,
) -> PyResult<Vec<Vec<BigUint>>> {
    let filter = parse_filter(filter)?;
    let t = py
        .detach(|| CountTable::compute(&field.spec, max_n, filter, work_cap))
        .map_err(grass_err)?;
    Ok(t.cells)
}

#[pyfunction]
fn gaussian_binomial(n: usize, k: usize, q: u64) -> BigUint {
    grassmannian::gaussian_binomial(n, k, q)
}

#[pyfunction]
#[pyo3(signature = (k, n, field, tnn = false, work_cap = DEFAULT_WORK_CAP))]
fn fixed_points(k: usize, n: usize, field: &PyField, tnn: bool, work_cap: u64) -> PyResult<Vec<PySubspace>> {
    let pts = structures::fixed_points(k, n, &field.spec, tnn, work_cap).map_err(struct_err)?;
    Ok(pts.into_iter().map(wrap).collect())
}

/// Is the matroid with these bases (1-based) realized by a TNN point?
/// Returns `(answer, witness)`.
#[pyfunction]
#[pyo3(signature = (n, k, bases, field, work_cap = DEFAULT_WORK_CAP))]
fn is_positroid(
    n: usize,
    k: usize,
    bases: Vec<Vec<usize>>,
    field: &PyField,
    work_cap: u64,
) -> PyResult<(bool, Option<PySubspace>)> {
    let sets = bases
        .into_iter()
        .map(|b| IndexSet::new(b, n))
        .collect::<Result<Vec<_>, _>>()
        .map_err(value_err)?;
    let m = structures::Matroid::new(n, k, sets).map_err(struct_err)?;
    let ans = structures::is_positroid(&m, &field.spec, PositroidMode::Exhaustive { work_cap })
        .map_err(struct_err)?;
    Ok((ans.is_positroid, ans.witness.map(wrap)))
}

#[pyfunction]
fn sign_variation(field: &PyField, v: Vec<u64>) -> PyResult<usize> {
    let codes = v.into_iter().map(|c| field.code(c)).collect::<PyResult<Vec<_>>>()?;
    Ok(structures::sign_variation(&field.spec, &codes))
}

/// |Gr^{>=0}_{2,n}(F_3)| by formula `variant` (1..=6).
#[pyfunction]
#[pyo3(signature = (n, variant = 1))]
fn f3_k2(n: usize, variant: u8) -> PyResult<num_bigint::BigInt> {
    closed_forms::f3_k2(n, variant).map_err(value_err)
}

/// |Gr^{>=0}_{2,n}(F_5)| by formula `variant` (1..=3).
#[pyfunction]
#[pyo3(signature = (n, variant = 1))]
fn f5_k2(n: usize, variant: u8) -> PyResult<num_bigint::BigInt> {
    closed_forms::f5_k2(n, variant).map_err(value_err)
}

#[pyfunction]
fn k1_nonneg(q: u64, n: usize) -> PyResult<num_bigint::BigInt> {
    closed_forms::k1_nonneg(q, n).map_err(value_err)
}

#[pyfunction]
fn k1_pos(q: u64, n: usize) -> PyResult<num_bigint::BigInt> {
    closed_forms::k1_pos(q, n).map_err(value_err)
}

/// Coefficients (constant first, as "a/b" strings) of the count as a polynomial in q.
#[pyfunction]
#[pyo3(signature = (n, positive = false))]
fn k1_poly(n: usize, positive: bool) -> Vec<String> {
    let p = if positive {
        closed_forms::k1_pos_poly(n)
    } else {
        closed_forms::k1_nonneg_poly(n)
    };
    p.coeff_strings()
}

/// Run a named verification suite; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (suite, max_n = None, work_cap = DEFAULT_WORK_CAP))]
fn run_suite<'py>(
    py: Python<'py>,
    suite: &str,
    max_n: Option<usize>,
    work_cap: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let s: Suite = suite.parse().map_err(PyValueError::new_err)?;
    let opts = VerifyOptions { max_n, work_cap };
    let report = py.detach(|| verify::run_suite(s, &opts)).map_err(|e| {
        if e.is_work_cap() {
            WorkCapExceeded::new_err(e.to_string())
        } else {
            value_err(e)
        }
    })?;
    py.import("json")?
        .call_method1("loads", (report.to_json().to_string(),))
}

#[pymodule]
#[pyo3(name = "fqtnn")]
fn fqtnn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PySubspace>()?;
    m.add("WorkCapExceeded", m.py().get_type::<WorkCapExceeded>())?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(count_table, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_points, m)?)?;
    m.add_function(wrap_pyfunction!(is_positroid, m)?)?;
    m.add_function(wrap_pyfunction!(sign_variation, m)?)?;
    m.add_function(wrap_pyfunction!(f3_k2, m)?)?;
    m.add_function(wrap_pyfunction!(f5_k2, m)?)?;
    m.add_function(wrap_pyfunction!(k1_nonneg, m)?)?;
    m.add_function(wrap_pyfunction!(k1_pos, m)?)?;
    m.add_function(wrap_pyfunction!(k1_poly, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
