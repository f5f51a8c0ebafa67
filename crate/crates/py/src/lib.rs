//! Python bindings: marked diagrams, graded algebras, splitting types,
//! prolongation towers and the rigidity classifier.

use std::collections::BTreeSet;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use flagrig::classify::classify;
use flagrig::json::{algebra_from_json, algebra_to_json, verdict_to_json};
use flagrig::models::{build_model, compare_graded, render};
use flagrig::prolongation::prolongation_tower;
use flagrig::serre::parabolic_nilradical;
use flagrig::splitting::{distribution_splitting, relative_fiber_splitting};
use flagrig::{Error, GradedLieAlgebra, MarkedDiagram};

create_exception!(flagrig_py, ScopeError, PyException);
create_exception!(flagrig_py, InvariantError, PyException);

fn py_err(e: Error) -> PyErr {
    match e.exit_code() {
        3 => ScopeError::new_err(e.to_string()),
        4 => InvariantError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn node(i: usize) -> PyResult<usize> {
    i.checked_sub(1).ok_or_else(|| PyValueError::new_err("node numbers start at 1"))
}

#[pyclass(name = "Diagram", frozen)]
struct PyDiagram {
    inner: MarkedDiagram,
}

#[pymethods]
impl PyDiagram {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(PyDiagram { inner: MarkedDiagram::parse(spec).map_err(py_err)? })
    }

    fn canonical(&self) -> String {
        self.inner.canonical_string()
    }

    /// Dimensions of `g_{-1}, g_{-2}, ...`.
    fn graded_dims(&self) -> Vec<usize> {
        self.inner.graded_dims().dims
    }

    fn dim(&self) -> usize {
        self.inner.graded_dims().total
    }

    fn picard_number(&self) -> usize {
        self.inner.picard_number()
    }

    /// Positive roots as coefficient vectors in the simple roots.
    fn positive_roots(&self) -> Vec<Vec<i64>> {
        self.inner.positive_roots().into_iter().map(|r| r.0).collect()
    }

    fn nilradical(&self) -> PyResult<PyAlgebra> {
        Ok(PyAlgebra { inner: parabolic_nilradical(&self.inner).map_err(py_err)?.algebra })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Diagram('{}')", self.inner)
    }
}

#[pyclass(name = "Algebra", frozen)]
struct PyAlgebra {
    inner: GradedLieAlgebra,
}

#[pymethods]
impl PyAlgebra {
    #[staticmethod]
    fn model(id: &str) -> PyResult<Self> {
        Ok(PyAlgebra { inner: build_model(id).map_err(py_err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyAlgebra { inner: algebra_from_json(text).map_err(py_err)? })
    }

    fn to_json(&self) -> String {
        algebra_to_json(&self.inner)
    }

    fn dims(&self) -> Vec<usize> {
        self.inner.dims()
    }

    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    /// Bracket of two basis elements, rendered with exact coefficients.
    fn bracket(&self, left: &str, right: &str) -> PyResult<String> {
        let i = self.inner.index_of(left).map_err(py_err)?;
        let j = self.inner.index_of(right).map_err(py_err)?;
        Ok(render(&self.inner, &self.inner.bracket_basis(i, j)))
    }

    fn check_jacobi(&self) -> bool {
        self.inner.check_jacobi()
    }

    /// Whether a bracket-preserving graded isomorphism onto `other` was found
    /// by matching degree-one labels.
    fn isomorphic_to(&self, other: &PyAlgebra) -> bool {
        compare_graded(&self.inner, &other.inner, None).certificate.is_some()
    }

    fn __len__(&self) -> usize {
        self.inner.dim()
    }
}

/// Twist degrees (descending) of layer `k` of the distribution generated by
/// node `beta`, along a curve of class `alpha`. Nodes are 1-based.
#[pyfunction]
#[pyo3(signature = (spec, beta, alpha, k = 1))]
fn split(spec: &str, beta: usize, alpha: usize, k: usize) -> PyResult<Vec<i64>> {
    let md = MarkedDiagram::parse(spec).map_err(py_err)?;
    Ok(distribution_splitting(&md, node(beta)?, k, node(alpha)?).map_err(py_err)?.degrees)
}

#[pyfunction]
fn split_fiber(spec: &str, subset: Vec<usize>, alpha: usize) -> PyResult<Vec<i64>> {
    let md = MarkedDiagram::parse(spec).map_err(py_err)?;
    let a: BTreeSet<usize> = subset.into_iter().map(node).collect::<PyResult<_>>()?;
    Ok(relative_fiber_splitting(&md, &a, node(alpha)?).map_err(py_err)?.degrees)
}

/// Rows `(step, computed, root_data, verified)`.
#[pyfunction]
fn prolong(spec: &str, steps: usize) -> PyResult<Vec<(usize, usize, usize, bool)>> {
    let md = MarkedDiagram::parse(spec).map_err(py_err)?;
    let r = prolongation_tower(&md, steps).map_err(py_err)?;
    Ok(r.rows.iter().map(|x| (x.step, x.computed, x.root_data, x.verified)).collect())
}

/// Verdict as a JSON document.
#[pyfunction]
fn classify_json(spec: &str) -> PyResult<String> {
    let md = MarkedDiagram::parse(spec).map_err(py_err)?;
    Ok(verdict_to_json(&classify(&md).map_err(py_err)?))
}

/// `Rigid`, `NotRigid(<degeneration>)` or `Undetermined`.
#[pyfunction]
fn classify_status(spec: &str) -> PyResult<String> {
    let md = MarkedDiagram::parse(spec).map_err(py_err)?;
    Ok(classify(&md).map_err(py_err)?.to_string())
}

#[pymodule]
fn flagrig_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDiagram>()?;
    m.add_class::<PyAlgebra>()?;
    m.add_function(wrap_pyfunction!(split, m)?)?;
    m.add_function(wrap_pyfunction!(split_fiber, m)?)?;
    m.add_function(wrap_pyfunction!(prolong, m)?)?;
    m.add_function(wrap_pyfunction!(classify_json, m)?)?;
    m.add_function(wrap_pyfunction!(classify_status, m)?)?;
    m.add("ScopeError", m.py().get_type::<ScopeError>())?;
    m.add("InvariantError", m.py().get_type::<InvariantError>())?;
    Ok(())
}
