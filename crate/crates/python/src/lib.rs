//! Python bindings. Structured results come back as canonical JSON text so
//! they stay byte-identical to the command-line output.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use cmhodge::io::canonical::to_canonical_json;
use cmhodge::io::catalog::groups_up_to;
use cmhodge::io::instance::{parse_instance_text, Degrees};
use cmhodge::io::report::{self, AnalyzeOptions, TOOL_VERSION};
use cmhodge::lattice::{lattice_rank, orbit_matrix};
use cmhodge::pohlmann::{self, DEFAULT_SUBSET_CAP};
use cmhodge::PointSet;

create_exception!(pycmhodge, CmhodgeError, PyException);
create_exception!(pycmhodge, CapExceededError, CmhodgeError);

fn py_err(e: cmhodge::Error) -> PyErr {
    if e.exit_code() == 4 {
        CapExceededError::new_err(e.to_string())
    } else {
        CmhodgeError::new_err(e.to_string())
    }
}

fn to_lists(sets: &[PointSet]) -> Vec<Vec<usize>> {
    sets.iter().map(|s| s.to_vec()).collect()
}

/// A validated instance: Galois group, embedding set and CM-type.
#[pyclass(frozen, name = "Instance", module = "pycmhodge")]
struct PyInstance {
    inner: cmhodge::Instance,
}

impl PyInstance {
    fn degrees(&self, degrees: Option<Vec<usize>>) -> Vec<usize> {
        let d = degrees.map(Degrees::List).unwrap_or(Degrees::All);
        d.resolve(self.inner.carrier.len())
    }
}

#[pymethods]
impl PyInstance {
    /// Builds a catalog entry such as `"cyclic:8"` or `"dihedral:8,sub=0.4"`.
    #[staticmethod]
    fn from_catalog(entry: &str) -> PyResult<Self> {
        let inner = cmhodge::catalog(entry).and_then(|s| s.build()).map_err(py_err)?;
        Ok(PyInstance { inner })
    }

    /// Parses the line-oriented instance format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let inner = parse_instance_text(text).and_then(|s| s.build()).map_err(py_err)?;
        Ok(PyInstance { inner })
    }

    #[getter]
    fn name(&self) -> Option<String> {
        self.inner.spec.name.clone()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.group.order()
    }

    #[getter]
    fn iota(&self) -> usize {
        self.inner.group.iota()
    }

    #[getter]
    fn embedding_count(&self) -> usize {
        self.inner.carrier.len()
    }

    #[getter]
    fn cm_type(&self) -> Vec<usize> {
        self.inner.phi.members().to_vec()
    }

    fn to_text(&self) -> String {
        self.inner.spec.to_text()
    }

    fn is_valid(&self, delta: Vec<usize>, p: usize) -> PyResult<bool> {
        let m = self.inner.carrier.len();
        if let Some(&s) = delta.iter().find(|&&s| s >= m) {
            return Err(CmhodgeError::new_err(format!("point {s} outside the embedding set")));
        }
        Ok(pohlmann::valid_delta(&self.inner.phi, PointSet::from_indices(delta), p))
    }

    /// Valid monomials of degree `p`, sorted by bitmask.
    fn valid_deltas(&self, py: Python<'_>, p: usize) -> Vec<Vec<usize>> {
        let phi = &self.inner.phi;
        py.detach(|| to_lists(&pohlmann::enumerate_valid(phi, p)))
    }

    #[pyo3(signature = (p, cap = None))]
    fn bruteforce_deltas(&self, p: usize, cap: Option<u128>) -> PyResult<Vec<Vec<usize>>> {
        let cap = cap.unwrap_or(DEFAULT_SUBSET_CAP);
        pohlmann::enumerate_valid_bruteforce(&self.inner.phi, p, cap)
            .map(|v| to_lists(&v))
            .map_err(|e| py_err(e.into()))
    }

    fn orbits(&self, p: usize) -> PyResult<Vec<Vec<Vec<usize>>>> {
        let valid = pohlmann::enumerate_valid(&self.inner.phi, p);
        let orbits = pohlmann::galois_orbits(&valid, &self.inner.carrier).map_err(|e| py_err(e.into()))?;
        Ok(orbits.iter().map(|o| to_lists(o)).collect())
    }

    /// Decomposition report for degree `p` as JSON.
    fn classify(&self, p: usize) -> PyResult<String> {
        let r = pohlmann::classify(&self.inner.phi, p).map_err(|e| py_err(e.into()))?;
        to_canonical_json(&r).map_err(py_err)
    }

    fn hodge_numbers(&self, r: usize) -> BTreeMap<(usize, usize), u128> {
        self.inner.phi.hodge_numbers(r)
    }

    /// `(raw, with_ones, bound, maximal)`.
    fn lattice_rank(&self) -> (usize, usize, usize, bool) {
        let r = lattice_rank(&orbit_matrix(&self.inner.phi));
        (r.raw, r.with_ones, r.bound, r.maximal)
    }

    #[pyo3(signature = (degrees = None, jobs = 1, certificates = false))]
    fn analyze(&self, py: Python<'_>, degrees: Option<Vec<usize>>, jobs: usize, certificates: bool) -> PyResult<String> {
        let opts = AnalyzeOptions {
            degrees: self.degrees(degrees),
            jobs,
            certificates,
        };
        let inst = &self.inner;
        py.detach(|| report::analyze(inst, &opts).and_then(|r| r.to_json()))
            .map_err(py_err)
    }

    /// Certificate document accepted by [`verify_certificate`].
    #[pyo3(signature = (degrees = None, jobs = 1))]
    fn certificate(&self, py: Python<'_>, degrees: Option<Vec<usize>>, jobs: usize) -> PyResult<String> {
        let ps = self.degrees(degrees);
        let inst = &self.inner;
        py.detach(|| report::certificate_document(inst, &ps, jobs).and_then(|d| d.to_json()))
            .map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(name={:?}, order={}, m={}, cm_type={})",
            self.inner.spec.name.as_deref().unwrap_or(""),
            self.inner.group.order(),
            self.inner.carrier.len(),
            self.inner.phi.members()
        )
    }
}

/// Returns `(passed, verification_json)`.
#[pyfunction]
#[pyo3(signature = (text, cap = None))]
fn verify_certificate(py: Python<'_>, text: &str, cap: Option<u128>) -> PyResult<(bool, String)> {
    let cap = cap.unwrap_or(DEFAULT_SUBSET_CAP);
    let v = py.detach(|| report::verify_document(text, cap)).map_err(py_err)?;
    Ok((v.passed, to_canonical_json(&v).map_err(py_err)?))
}

#[pyfunction]
#[pyo3(signature = (max_order = 12))]
fn catalog_names(max_order: usize) -> Vec<&'static str> {
    groups_up_to(max_order)
}

#[pymodule]
fn pycmhodge(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", TOOL_VERSION)?;
    m.add("CmhodgeError", m.py().get_type::<CmhodgeError>())?;
    m.add("CapExceededError", m.py().get_type::<CapExceededError>())?;
    m.add_class::<PyInstance>()?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    Ok(())
}
