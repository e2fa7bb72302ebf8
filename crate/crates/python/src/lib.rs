//! Python bindings: a thin wrapper around the core types, exposing the main
//! operations on defining graphs and group elements.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use raag::conjugation;
use raag::egraph;
use raag::element::Element;
use raag::graph::DefiningGraph;
use raag::lattice;
use raag::quasiroot;
use raag::stabilizer;
use raag::star;

fn convert(err: raag::Error) -> PyErr {
    match err {
        raag::Error::Internal(_) | raag::Error::Budget(_) => PyRuntimeError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

/// A finite simplicial defining graph.
#[pyclass(frozen, name = "Graph")]
struct PyGraph {
    inner: Arc<DefiningGraph>,
}

#[pymethods]
impl PyGraph {
    /// Parses the graph text format (`vertices:` line plus `edge:` lines).
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: Arc::new(DefiningGraph::parse(text).map_err(convert)?) })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PyValueError::new_err(format!("cannot read {path}: {e}")))?;
        Self::parse(&text)
    }

    /// Complement of the path on the given vertices, a standard test family.
    #[staticmethod]
    fn complement_of_path(names: Vec<String>) -> PyResult<Self> {
        Ok(PyGraph { inner: Arc::new(raag::graph::complement_of_path(&names)) })
    }

    fn vertices(&self) -> Vec<String> {
        self.inner.vertex_names().to_vec()
    }

    fn edges(&self) -> Vec<(String, String)> {
        self.inner
            .edges()
            .map(|(i, j)| {
                (self.inner.vertex_name(i).to_owned(), self.inner.vertex_name(j).to_owned())
            })
            .collect()
    }

    fn star(&self, vertex: &str) -> PyResult<Vec<String>> {
        let set = self.inner.star_by_name(vertex).map_err(convert)?;
        Ok(self.inner.set_names(set).iter().map(|s| s.to_string()).collect())
    }

    fn link(&self, vertex: &str) -> PyResult<Vec<String>> {
        let set = self.inner.link_by_name(vertex).map_err(convert)?;
        Ok(self.inner.set_names(set).iter().map(|s| s.to_string()).collect())
    }

    fn complement(&self) -> PyGraph {
        PyGraph { inner: Arc::new(self.inner.complement()) }
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    /// Graph diameter, or None for a disconnected graph.
    fn diameter(&self) -> Option<usize> {
        self.inner.diameter().as_finite()
    }

    fn is_join(&self) -> bool {
        self.inner.is_join()
    }

    /// Parses a word (`v1 v2^-1 ...`, `1` for the identity) into an element.
    fn element(&self, word: &str) -> PyResult<PyElement> {
        Ok(PyElement { inner: Element::parse(&self.inner, word).map_err(convert)? })
    }

    fn identity(&self) -> PyElement {
        PyElement { inner: Element::identity(&self.inner) }
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph({} vertices, {} edges)",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

/// A group element in canonical reduced form.
#[pyclass(frozen, name = "Element")]
struct PyElement {
    inner: Element,
}

#[pymethods]
impl PyElement {
    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element({})", self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.word_length()
    }

    fn __eq__(&self, other: &PyElement) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }

    fn __mul__(&self, other: &PyElement) -> PyResult<PyElement> {
        Ok(PyElement { inner: self.inner.multiply(&other.inner).map_err(convert)? })
    }

    fn inverse(&self) -> PyElement {
        PyElement { inner: self.inner.inverse() }
    }

    fn pow(&self, n: i64) -> PyResult<PyElement> {
        Ok(PyElement { inner: self.inner.pow(n).map_err(convert)? })
    }

    fn word_length(&self) -> usize {
        self.inner.word_length()
    }

    fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }

    fn support(&self) -> Vec<String> {
        let g = self.inner.graph();
        self.inner.support().iter().map(|v| g.vertex_name(v).to_owned()).collect()
    }

    fn starting_letters(&self) -> Vec<String> {
        let g = self.inner.graph();
        self.inner.starting_letters().iter().map(|l| l.display(g)).collect()
    }

    fn disjointly_commutes(&self, other: &PyElement) -> PyResult<bool> {
        self.inner.disjointly_commutes(&other.inner).map_err(convert)
    }

    fn is_prefix_of(&self, other: &PyElement) -> PyResult<bool> {
        lattice::is_prefix(&self.inner, &other.inner).map_err(convert)
    }

    fn is_suffix_of(&self, other: &PyElement) -> PyResult<bool> {
        lattice::is_suffix(&self.inner, &other.inner).map_err(convert)
    }
}

#[pyfunction]
fn gcd_left(a: &PyElement, b: &PyElement) -> PyResult<PyElement> {
    Ok(PyElement { inner: lattice::gcd_left(&a.inner, &b.inner).map_err(convert)? })
}

#[pyfunction]
fn gcd_right(a: &PyElement, b: &PyElement) -> PyResult<PyElement> {
    Ok(PyElement { inner: lattice::gcd_right(&a.inner, &b.inner).map_err(convert)? })
}

#[pyfunction]
fn lcm_left(a: &PyElement, b: &PyElement) -> PyResult<Option<PyElement>> {
    Ok(lattice::lcm_left(&a.inner, &b.inner)
        .map_err(convert)?
        .map(|inner| PyElement { inner }))
}

#[pyfunction]
fn cyclic_reduce(g: &PyElement) -> (PyElement, PyElement) {
    let r = conjugation::cyclic_reduce(&g.inner);
    (PyElement { inner: r.conjugator }, PyElement { inner: r.core })
}

#[pyfunction]
fn is_cyclically_reduced(g: &PyElement) -> bool {
    conjugation::is_cyclically_reduced(&g.inner)
}

#[pyfunction]
fn conjugating_element(a: &PyElement, b: &PyElement) -> PyResult<Option<PyElement>> {
    Ok(conjugation::conjugating_element(&a.inner, &b.inner)
        .map_err(convert)?
        .map(|inner| PyElement { inner }))
}

#[pyfunction]
fn star_length(g: &PyElement) -> usize {
    star::star_length(&g.inner)
}

/// Star factors with a witnessing star vertex for each.
#[pyfunction]
fn star_decompose(g: &PyElement) -> Vec<(PyElement, String)> {
    let graph = g.inner.graph().clone();
    star::star_decompose(&g.inner)
        .factors
        .into_iter()
        .map(|(f, v)| (PyElement { inner: f }, graph.vertex_name(v).to_owned()))
        .collect()
}

#[pyfunction]
fn d_star(a: &PyElement, b: &PyElement) -> PyResult<usize> {
    star::d_star(&a.inner, &b.inner).map_err(convert)
}

/// "split", "non-split", or "strongly non-split".
#[pyfunction]
fn classify(g: &PyElement) -> PyResult<String> {
    Ok(match star::classify(&g.inner).map_err(convert)? {
        star::SplitClass::Split { .. } => "split".to_owned(),
        star::SplitClass::NonSplit { .. } => "non-split".to_owned(),
        star::SplitClass::StronglyNonSplit => "strongly non-split".to_owned(),
    })
}

#[pyfunction]
fn is_loxodromic(g: &PyElement) -> PyResult<bool> {
    star::is_loxodromic(&g.inner).map_err(convert)
}

/// Certified interval for the star-metric translation length, as two
/// (numerator, denominator) pairs.
#[pyfunction]
fn translation_length_bounds(
    g: &PyElement,
    max_power: usize,
) -> PyResult<((i64, i64), (i64, i64))> {
    let (lo, hi) = star::translation_length_bounds(&g.inner, max_power).map_err(convert)?;
    Ok(((*lo.numer(), *lo.denom()), (*hi.numer(), *hi.denom())))
}

/// Parts g_m..g_0 of the power-prefix decomposition plus the minimal
/// exponent and the geodesic complement.
#[pyfunction]
fn power_prefix_decompose(
    g: &PyElement,
    u: &PyElement,
    max_power: usize,
) -> PyResult<(Vec<PyElement>, usize, PyElement)> {
    let d = raag::powers::power_prefix_decompose(&g.inner, &u.inner, max_power).map_err(convert)?;
    Ok((
        d.parts.into_iter().map(|inner| PyElement { inner }).collect(),
        d.m,
        PyElement { inner: d.complement },
    ))
}

#[pyfunction]
fn is_primitive(g: &PyElement) -> PyResult<bool> {
    quasiroot::is_primitive(&g.inner).map_err(convert)
}

/// Quasi-root decomposition (a, root, epsilon, n, b) of w for the given
/// side ("left" or "right").
#[pyfunction]
fn extract_quasi_root(
    g: &PyElement,
    w: &PyElement,
    r: usize,
    big_r: usize,
    side: &str,
) -> PyResult<(PyElement, PyElement, i32, usize, PyElement)> {
    let side = match side {
        "left" => quasiroot::Side::Left,
        "right" => quasiroot::Side::Right,
        other => return Err(PyValueError::new_err(format!("unknown side `{other}`"))),
    };
    let d = quasiroot::extract_quasi_root(&g.inner, &w.inner, r, big_r, side).map_err(convert)?;
    Ok((
        PyElement { inner: d.a },
        PyElement { inner: d.root },
        d.epsilon.as_int(),
        d.n,
        PyElement { inner: d.b },
    ))
}

/// Acylindricity constants (R, N) for the given space ("star" or "egraph").
#[pyfunction]
fn acylindricity_constants(graph: &PyGraph, r: u64, space: &str) -> PyResult<(i64, i64)> {
    let space = match space {
        "star" => stabilizer::Space::Star,
        "egraph" => stabilizer::Space::ExtensionGraph,
        other => return Err(PyValueError::new_err(format!("unknown space `{other}`"))),
    };
    stabilizer::acylindricity_constants(&graph.inner, r, space).map_err(convert)
}

#[pyfunction]
fn xi_brute_force(
    x: &PyElement,
    y: &PyElement,
    r: usize,
    cap: usize,
) -> PyResult<Vec<PyElement>> {
    Ok(stabilizer::xi_brute_force(&x.inner, &y.inner, r, cap)
        .map_err(convert)?
        .into_iter()
        .map(|inner| PyElement { inner })
        .collect())
}

/// (vertex count, edge count) of the extension-graph truncation at the
/// given conjugator length cap.
#[pyfunction]
fn egraph_ball_summary(graph: &PyGraph, cap: usize) -> PyResult<(usize, usize)> {
    let ball = egraph::build_ball(&graph.inner, cap, egraph::BallOptions::default())
        .map_err(convert)?;
    Ok((ball.vertex_count(), ball.edge_count))
}

#[pymodule]
fn raag_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyElement>()?;
    m.add_function(wrap_pyfunction!(gcd_left, m)?)?;
    m.add_function(wrap_pyfunction!(gcd_right, m)?)?;
    m.add_function(wrap_pyfunction!(lcm_left, m)?)?;
    m.add_function(wrap_pyfunction!(cyclic_reduce, m)?)?;
    m.add_function(wrap_pyfunction!(is_cyclically_reduced, m)?)?;
    m.add_function(wrap_pyfunction!(conjugating_element, m)?)?;
    m.add_function(wrap_pyfunction!(star_length, m)?)?;
    m.add_function(wrap_pyfunction!(star_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(d_star, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(is_loxodromic, m)?)?;
    m.add_function(wrap_pyfunction!(translation_length_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(power_prefix_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(is_primitive, m)?)?;
    m.add_function(wrap_pyfunction!(extract_quasi_root, m)?)?;
    m.add_function(wrap_pyfunction!(acylindricity_constants, m)?)?;
    m.add_function(wrap_pyfunction!(xi_brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(egraph_ball_summary, m)?)?;
    Ok(())
}
