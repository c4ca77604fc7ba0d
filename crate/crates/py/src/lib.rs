//! Python bindings: matrices, generator specs, validity, confidentiality
//! analysis, the attack, and dispersal to/from piece-file bytes.

use ida_core::confidential::SearchLimits;
use ida_core::{self as core, FieldWidth, IdaError};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

fn py_err(e: IdaError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn width(bits: u32) -> PyResult<FieldWidth> {
    FieldWidth::try_from(bits).map_err(py_err)
}

#[pyclass(name = "GfMatrix", module = "ida_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyGfMatrix {
    inner: core::GfMatrix,
}

#[pymethods]
impl PyGfMatrix {
    #[new]
    fn new(field_width: u32, rows: Vec<Vec<u16>>) -> PyResult<Self> {
        let inner = core::GfMatrix::from_rows(width(field_width)?, &rows).map_err(py_err)?;
        Ok(PyGfMatrix { inner })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyGfMatrix { inner: core::GfMatrix::parse_text(text).map_err(py_err)? })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn rows(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.inner.cols()
    }

    #[getter]
    fn field_width(&self) -> u32 {
        self.inner.width().bits()
    }

    fn to_list(&self) -> Vec<Vec<u16>> {
        (0..self.inner.rows()).map(|r| self.inner.row(r).to_vec()).collect()
    }

    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn invert(&self) -> PyResult<Self> {
        Ok(PyGfMatrix { inner: self.inner.invert().map_err(py_err)? })
    }

    fn matmul(&self, other: &PyGfMatrix) -> PyResult<Self> {
        Ok(PyGfMatrix { inner: self.inner.matmul(&other.inner).map_err(py_err)? })
    }

    fn submatrix(&self, rows: Vec<usize>, cols: Vec<usize>) -> PyResult<Self> {
        Ok(PyGfMatrix { inner: self.inner.submatrix(&rows, &cols).map_err(py_err)? })
    }

    fn __eq__(&self, other: &PyGfMatrix) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("GfMatrix(GF(2^{}), {}x{}, {:?})", self.inner.width(), self.inner.rows(), self.inner.cols(), self.to_list())
    }
}

#[pyclass(name = "GeneratorSpec", module = "ida_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyGeneratorSpec {
    inner: core::GeneratorSpec,
}

#[pymethods]
impl PyGeneratorSpec {
    #[new]
    #[pyo3(signature = (family, field_width, m, n, points=None))]
    fn new(family: &str, field_width: u32, m: usize, n: usize, points: Option<Vec<u16>>) -> PyResult<Self> {
        let family: core::Family = family.parse().map_err(py_err)?;
        let inner = core::GeneratorSpec::new(family, width(field_width)?, m, n)
            .with_points(points.unwrap_or_default())
            .resolved();
        Ok(PyGeneratorSpec { inner })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let inner: core::GeneratorSpec = text.parse().map_err(py_err)?;
        Ok(PyGeneratorSpec { inner: inner.resolved() })
    }

    #[staticmethod]
    fn explicit(matrix: &PyGfMatrix) -> Self {
        PyGeneratorSpec { inner: core::GeneratorSpec::explicit(&matrix.inner) }
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    fn build(&self) -> PyResult<PyGfMatrix> {
        Ok(PyGfMatrix { inner: self.inner.build().map_err(py_err)? })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("GeneratorSpec('{}')", self.inner)
    }
}

/// Both IDA conditions as a dict.
#[pyfunction]
fn check_validity<'py>(py: Python<'py>, matrix: &PyGfMatrix) -> PyResult<Bound<'py, PyDict>> {
    let rep = core::check_validity(&matrix.inner).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("valid", rep.is_valid())?;
    d.set_item("identity_column", rep.identity_column)?;
    d.set_item("singular_subset", rep.singular_subset.clone())?;
    d.set_item("subsets_checked", rep.subsets_checked)?;
    d.set_item("sampled", rep.sampled)?;
    Ok(d)
}

#[pyfunction]
fn strongify(matrix: &PyGfMatrix, m: usize) -> PyResult<PyGfMatrix> {
    Ok(PyGfMatrix { inner: core::strongify(&matrix.inner, m).map_err(py_err)? })
}

/// Weak-confidentiality search; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (matrix, max_submatrices=1_000_000))]
fn detect_weak(matrix: &PyGfMatrix, max_submatrices: u64) -> PyResult<String> {
    let rep = core::detect_weak(&matrix.inner, SearchLimits { max_submatrices }).map_err(py_err)?;
    Ok(rep.to_json())
}

/// Square-submatrix certificate with weak-search fallback; returns JSON.
#[pyfunction]
#[pyo3(signature = (matrix, max_submatrices=1_000_000))]
fn certify_strong(matrix: &PyGfMatrix, max_submatrices: u64) -> PyResult<String> {
    let rep = core::certify_strong(&matrix.inner, SearchLimits { max_submatrices }).map_err(py_err)?;
    Ok(rep.to_json())
}

#[pyfunction]
fn recoverable_oracle(matrix: &PyGfMatrix, pieces: Vec<usize>) -> PyResult<Vec<usize>> {
    if let Some(&bad) = pieces.iter().find(|&&j| j >= matrix.inner.cols()) {
        return Err(py_err(IdaError::PieceIndexOutOfRange { index: bad, n: matrix.inner.cols() }));
    }
    Ok(core::recoverable_oracle(&matrix.inner, &pieces))
}

#[pyfunction]
fn attack(matrix: &PyGfMatrix, eavesdropped: Vec<(usize, Vec<u16>)>) -> PyResult<Vec<(usize, Vec<u16>)>> {
    core::attack(&matrix.inner, &eavesdropped).map_err(py_err)
}

/// Disperse `data` and return the n piece files as bytes.
#[pyfunction]
fn disperse<'py>(py: Python<'py>, data: &[u8], spec: &PyGeneratorSpec) -> PyResult<Vec<Bound<'py, PyBytes>>> {
    let pieces = core::disperse(data, &spec.inner).map_err(py_err)?;
    pieces
        .iter()
        .map(|p| Ok(PyBytes::new(py, &p.to_bytes().map_err(py_err)?)))
        .collect()
}

#[pyfunction]
fn reconstruct<'py>(py: Python<'py>, pieces: Vec<Vec<u8>>) -> PyResult<Bound<'py, PyBytes>> {
    let parsed = pieces
        .iter()
        .map(|b| core::Piece::from_bytes(b))
        .collect::<Result<Vec<_>, _>>()
        .map_err(py_err)?;
    let data = core::reconstruct(&parsed).map_err(py_err)?;
    Ok(PyBytes::new(py, &data))
}

#[pymodule]
fn ida_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGfMatrix>()?;
    m.add_class::<PyGeneratorSpec>()?;
    m.add_function(wrap_pyfunction!(check_validity, m)?)?;
    m.add_function(wrap_pyfunction!(strongify, m)?)?;
    m.add_function(wrap_pyfunction!(detect_weak, m)?)?;
    m.add_function(wrap_pyfunction!(certify_strong, m)?)?;
    m.add_function(wrap_pyfunction!(recoverable_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(attack, m)?)?;
    m.add_function(wrap_pyfunction!(disperse, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
