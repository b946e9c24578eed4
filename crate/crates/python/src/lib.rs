//! Python bindings: `gaussmap.Multivector`, `gaussmap.Manifold` and the
//! verification entry points.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use gaussmap_core::blade::{self, UnitBlade};
use gaussmap_core::calculus::{derivatives, gauss_map};
use gaussmap_core::catalog::{self, CatalogEntry};
use gaussmap_core::chart::FDConfig;
use gaussmap_core::curvature::{mean_curvature_routes, second_fundamental};
use gaussmap_core::identities::{self, GridSpec};
use gaussmap_core::report::{self, CheckSelection, RunConfig};
use gaussmap_core::{selftest, GeoError, Multivector};

fn err(e: GeoError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_dict<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn fd_config(h1: Option<f64>, h2: Option<f64>) -> PyResult<FDConfig> {
    let mut cfg = FDConfig::default();
    if let Some(h) = h1 {
        cfg.h1 = h;
    }
    if let Some(h) = h2 {
        cfg.h2 = h;
    }
    cfg.validate().map_err(err)?;
    Ok(cfg)
}

/// Dense multivector of the Euclidean Clifford algebra of R^dim.
#[pyclass(name = "Multivector", module = "gaussmap", from_py_object)]
#[derive(Clone)]
struct PyMultivector {
    inner: Multivector,
}

impl From<Multivector> for PyMultivector {
    fn from(inner: Multivector) -> Self {
        Self { inner }
    }
}

impl PyMultivector {
    fn same_dim(&self, other: &PyMultivector) -> PyResult<()> {
        if self.inner.dim() != other.inner.dim() {
            return Err(PyValueError::new_err(format!(
                "dimension mismatch: {} vs {}",
                self.inner.dim(),
                other.inner.dim()
            )));
        }
        Ok(())
    }
}

#[pymethods]
impl PyMultivector {
    /// Coefficients indexed by basis-blade bitmask; `len(coeffs) == 2**dim`.
    #[new]
    fn new(dim: usize, coeffs: Vec<f64>) -> PyResult<Self> {
        Multivector::new(dim, coeffs).map(Self::from).map_err(err)
    }

    #[staticmethod]
    fn scalar(dim: usize, value: f64) -> PyResult<Self> {
        Multivector::new(dim, vec![0.0; 1 << dim.min(12)]).map_err(err)?;
        Ok(Multivector::scalar(dim, value).into())
    }

    #[staticmethod]
    fn vector(components: Vec<f64>) -> PyResult<Self> {
        Multivector::new(components.len(), vec![0.0; 1 << components.len().min(12)])
            .map_err(err)?;
        Ok(Multivector::vector(&components).into())
    }

    #[staticmethod]
    fn blade(dim: usize, mask: usize, coeff: f64) -> PyResult<Self> {
        Multivector::new(dim, vec![0.0; 1 << dim.min(12)]).map_err(err)?;
        if mask >= 1 << dim {
            return Err(PyIndexError::new_err(format!(
                "mask {mask} out of range for dim {dim}"
            )));
        }
        Ok(Multivector::blade(dim, mask, coeff).into())
    }

    #[staticmethod]
    fn pseudoscalar(dim: usize) -> PyResult<Self> {
        Multivector::new(dim, vec![0.0; 1 << dim.min(12)]).map_err(err)?;
        Ok(Multivector::pseudoscalar(dim).into())
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn coeffs(&self) -> Vec<f64> {
        self.inner.coeffs().to_vec()
    }

    fn __getitem__(&self, mask: usize) -> PyResult<f64> {
        self.inner
            .coeffs()
            .get(mask)
            .copied()
            .ok_or_else(|| PyIndexError::new_err(format!("mask {mask} out of range")))
    }

    fn grade(&self, r: usize) -> PyResult<Self> {
        self.inner.try_grade(r).map(Self::from).map_err(err)
    }

    fn grades(&self) -> Vec<usize> {
        self.inner.grades_above(0.0).iter().collect()
    }

    fn reverse(&self) -> Self {
        self.inner.reverse().into()
    }

    fn involute(&self) -> Self {
        self.inner.involute().into()
    }

    fn hodge(&self) -> Self {
        self.inner.hodge().into()
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    fn scalar_part(&self) -> f64 {
        self.inner.scalar_part()
    }

    fn gp(&self, other: &PyMultivector) -> PyResult<Self> {
        self.same_dim(other)?;
        Ok(self.inner.gp(&other.inner).into())
    }

    fn wedge(&self, other: &PyMultivector) -> PyResult<Self> {
        self.same_dim(other)?;
        Ok(self.inner.wedge(&other.inner).into())
    }

    fn lcontract(&self, other: &PyMultivector) -> PyResult<Self> {
        self.same_dim(other)?;
        Ok(self.inner.lcontract(&other.inner).into())
    }

    fn rcontract(&self, other: &PyMultivector) -> PyResult<Self> {
        self.same_dim(other)?;
        Ok(self.inner.rcontract(&other.inner).into())
    }

    fn commutator(&self, other: &PyMultivector) -> PyResult<Self> {
        self.same_dim(other)?;
        Ok(self.inner.commutator(&other.inner).into())
    }

    fn scalar_product(&self, other: &PyMultivector) -> PyResult<f64> {
        self.same_dim(other)?;
        Ok(self.inner.scalar_product(&other.inner))
    }

    fn approx_eq(&self, other: &PyMultivector, tol: f64) -> PyResult<bool> {
        self.same_dim(other)?;
        Ok(self.inner.approx_eq(&other.inner, tol))
    }

    fn is_simple(&self) -> bool {
        blade::is_simple(&self.inner)
    }

    /// Projection onto the subspace of the blade `b`.
    fn project(&self, b: &PyMultivector) -> PyResult<Self> {
        self.same_dim(b)?;
        let b = UnitBlade::normalized(b.inner.clone()).map_err(err)?;
        Ok(blade::project(&self.inner, &b).into())
    }

    fn __add__(&self, other: &PyMultivector) -> PyResult<Self> {
        self.same_dim(other)?;
        Ok((&self.inner + &other.inner).into())
    }

    fn __sub__(&self, other: &PyMultivector) -> PyResult<Self> {
        self.same_dim(other)?;
        Ok((&self.inner - &other.inner).into())
    }

    fn __neg__(&self) -> Self {
        (-&self.inner).into()
    }

    /// Geometric product, or scaling by a float.
    fn __mul__(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        if let Ok(m) = other.extract::<PyMultivector>() {
            return self.gp(&m);
        }
        let s: f64 = other.extract()?;
        Ok((&self.inner * s).into())
    }

    fn __rmul__(&self, s: f64) -> Self {
        (&self.inner * s).into()
    }

    fn __xor__(&self, other: &PyMultivector) -> PyResult<Self> {
        self.wedge(other)
    }

    fn __eq__(&self, other: &PyMultivector) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Multivector({})", self.inner)
    }
}

/// A catalog submanifold with evaluation of its geometric quantities.
#[pyclass(name = "Manifold", module = "gaussmap")]
struct PyManifold {
    entry: CatalogEntry,
}

#[pymethods]
impl PyManifold {
    #[new]
    #[pyo3(signature = (name, params = None))]
    fn new(name: &str, params: Option<BTreeMap<String, f64>>) -> PyResult<Self> {
        let entry = catalog::get(name, &params.unwrap_or_default()).map_err(err)?;
        Ok(Self { entry })
    }

    #[getter]
    fn name(&self) -> String {
        self.entry.name.clone()
    }

    #[getter]
    fn params(&self) -> BTreeMap<String, f64> {
        self.entry.params.clone()
    }

    #[getter]
    fn intrinsic_dim(&self) -> usize {
        self.entry.chart.intrinsic_dim()
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.entry.chart.ambient_dim()
    }

    #[getter]
    fn is_minimal(&self) -> bool {
        self.entry.expected.is_minimal
    }

    fn point(&self, u: Vec<f64>) -> PyResult<Vec<f64>> {
        self.check_point(&u)?;
        Ok(self.entry.chart.eval(&u).iter().copied().collect())
    }

    /// Unit tangent blade at `u`.
    fn gauss_map(&self, u: Vec<f64>) -> PyResult<PyMultivector> {
        self.check_point(&u)?;
        gauss_map(self.entry.chart())
            .eval(&u)
            .map(PyMultivector::from)
            .map_err(err)
    }

    /// Vector derivative of the Gauss map at `u`.
    #[pyo3(signature = (u, h1 = None, h2 = None))]
    fn gauss_map_derivative(
        &self,
        u: Vec<f64>,
        h1: Option<f64>,
        h2: Option<f64>,
    ) -> PyResult<PyMultivector> {
        let cfg = fd_config(h1, h2)?;
        let d = derivatives(&gauss_map(self.entry.chart()), &u, &cfg).map_err(err)?;
        Ok(d.left().into())
    }

    /// Mean-curvature vector from the three independent routes.
    #[pyo3(signature = (u, h1 = None, h2 = None))]
    fn mean_curvature<'py>(
        &self,
        py: Python<'py>,
        u: Vec<f64>,
        h1: Option<f64>,
        h2: Option<f64>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let cfg = fd_config(h1, h2)?;
        let r = mean_curvature_routes(self.entry.chart(), &u, &cfg).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item(
            "coefficients",
            r.coefficients.iter().copied().collect::<Vec<_>>(),
        )?;
        d.set_item("gauss", r.gauss.iter().copied().collect::<Vec<_>>())?;
        d.set_item(
            "normal_frame",
            r.normal_frame.iter().copied().collect::<Vec<_>>(),
        )?;
        d.set_item("spread", r.spread())?;
        Ok(d)
    }

    /// Second fundamental form coefficients h[alpha][j][l] and |B|^2.
    #[pyo3(signature = (u, h1 = None, h2 = None))]
    fn second_fundamental<'py>(
        &self,
        py: Python<'py>,
        u: Vec<f64>,
        h1: Option<f64>,
        h2: Option<f64>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let cfg = fd_config(h1, h2)?;
        let sf = second_fundamental(self.entry.chart(), &u, &cfg).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("h", sf.h.clone())?;
        d.set_item("norm_b2", sf.norm_b2)?;
        d.set_item("symmetry_defect", sf.symmetry_defect())?;
        Ok(d)
    }

    /// Runs checks and returns the report as a dict.
    #[allow(clippy::too_many_arguments)]
    #[pyo3(signature = (checks = None, grid = None, inset = 0.05, h1 = None, h2 = None, tol_scale = 1.0))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        checks: Option<Vec<String>>,
        grid: Option<Vec<usize>>,
        inset: f64,
        h1: Option<f64>,
        h2: Option<f64>,
        tol_scale: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let mut cfg = RunConfig::new(self.entry.name.clone());
        cfg.params = self.entry.params.clone();
        cfg.checks = checks.map_or(CheckSelection::All, CheckSelection::List);
        cfg.grid = GridSpec::new(grid.unwrap_or_else(|| vec![5, 5]), inset);
        cfg.fd = fd_config(h1, h2)?;
        cfg.tol_scale = tol_scale;
        let report = py.detach(|| report::execute(&cfg)).map_err(err)?;
        to_dict(py, &report)
    }

    fn __repr__(&self) -> String {
        let params: Vec<String> = self
            .entry
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!("Manifold('{}', {})", self.entry.name, params.join(", "))
    }
}

impl PyManifold {
    fn check_point(&self, u: &[f64]) -> PyResult<()> {
        let m = self.entry.chart.intrinsic_dim();
        if u.len() != m {
            return Err(PyValueError::new_err(format!(
                "expected {m} parameters, got {}",
                u.len()
            )));
        }
        Ok(())
    }
}

#[pyfunction]
fn manifolds() -> Vec<&'static str> {
    catalog::list().to_vec()
}

#[pyfunction]
fn default_params(name: &str) -> PyResult<BTreeMap<String, f64>> {
    catalog::default_params(name).map_err(err)
}

#[pyfunction]
fn check_ids() -> Vec<&'static str> {
    identities::check_ids()
}

/// Clifford algebra property suite; returns one dict per (property, dim).
#[pyfunction]
#[pyo3(signature = (cases = 100, dims = vec![3, 4, 5, 6], seed = 7))]
fn algebra_selftest<'py>(
    py: Python<'py>,
    cases: usize,
    dims: Vec<usize>,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    if dims
        .iter()
        .any(|d| *d == 0 || *d > gaussmap_core::multivector::MAX_DIM)
    {
        return Err(PyValueError::new_err("dims must lie in 1..=12"));
    }
    let outcomes = py.detach(|| selftest::run(&dims, cases, seed));
    to_dict(py, &outcomes)
}

#[pymodule]
fn gaussmap(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMultivector>()?;
    m.add_class::<PyManifold>()?;
    m.add_function(wrap_pyfunction!(manifolds, m)?)?;
    m.add_function(wrap_pyfunction!(default_params, m)?)?;
    m.add_function(wrap_pyfunction!(check_ids, m)?)?;
    m.add_function(wrap_pyfunction!(algebra_selftest, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
