//! Python bindings: categories, diagrams and the cohomology and Ext
//! computations over them. Structured results come back as plain Python
//! objects decoded from the same JSON the command-line reports use.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde::Serialize;

use catext_core::cli::{random_instance as draw_instance, tot_dims, Bounds};
use catext_core::cohomology::{bw_cohomology as bw, limit_cohomology as limits};
use catext_core::diagrams::{
    check_functor, codomain_system, hom_natural_system, Coefficient, DiagramFile, DiagramFunctor, Functor,
};
use catext_core::exactalg::IntMatrix;
use catext_core::fincat::{examples, CategoryFile, FinCat};
use catext_core::homalg::oracle_ext;
use catext_core::specseq::{build_double_complex, resolve_functor, spectral_sequence as pages, verify_theorem, Filtration};
use catext_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Internal(_) | Error::CompositionNonzero => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    PyModule::import(py, "json")?.call_method1("loads", (text,))
}

/// A finite category with a total composition table.
#[pyclass(frozen, skip_from_py_object, module = "catext")]
#[derive(Clone)]
pub struct Category {
    inner: Arc<FinCat>,
}

#[pymethods]
impl Category {
    /// Parses the JSON category format. Associativity is not checked here; see `validate`.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let cat = CategoryFile::parse(text).and_then(|f| f.to_category()).map_err(py_err)?;
        Ok(Category { inner: Arc::new(cat) })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PyValueError::new_err(format!("{path}: {e}")))?;
        Self::from_json(&text)
    }

    /// One of `terminal`, `arrow`, `cospan`, `z/<n>` (cyclic group) or `chain/<n>` (total order).
    #[staticmethod]
    fn example(name: &str) -> PyResult<Self> {
        let parse = |s: &str| s.parse::<usize>().map_err(|_| PyValueError::new_err(format!("bad size in '{name}'")));
        let cat = match name.split_once('/') {
            None if name == "terminal" => examples::terminal(),
            None if name == "arrow" => examples::arrow(),
            None if name == "cospan" => examples::cospan(),
            Some(("z", n)) => examples::cyclic_group(parse(n)?.max(1)),
            Some(("chain", n)) => examples::total_order(parse(n)?.max(1)),
            _ => return Err(PyValueError::new_err(format!("unknown example '{name}'"))),
        };
        Ok(Category { inner: Arc::new(cat) })
    }

    #[getter]
    fn objects(&self) -> Vec<String> {
        self.inner.objects().to_vec()
    }

    /// `(name, dom, cod)` for every morphism, identities included.
    #[getter]
    fn morphisms(&self) -> Vec<(String, String, String)> {
        let objects = self.inner.objects();
        self.inner
            .morphisms()
            .iter()
            .map(|m| (m.name.clone(), objects[m.dom].clone(), objects[m.cod].clone()))
            .collect()
    }

    /// Violated identity, closure and associativity instances; empty when valid.
    fn validate(&self) -> Vec<String> {
        self.inner.validate().violations.iter().map(ToString::to_string).collect()
    }

    /// Number of composable chains of length `n`, degenerate ones included.
    fn nerve_size(&self, n: usize) -> usize {
        self.inner.nerve(n).len()
    }

    fn to_json(&self) -> String {
        CategoryFile::from_category(&self.inner).to_json()
    }

    fn __repr__(&self) -> String {
        format!(
            "Category({} objects, {} morphisms)",
            self.inner.num_objects(),
            self.inner.num_morphisms()
        )
    }
}

#[derive(Clone)]
enum Values {
    Int(Functor<IntMatrix>),
    Modules(DiagramFunctor),
}

/// A functor from a category to modules over `F_p[x]/(x^m)` or to free abelian groups.
#[pyclass(frozen, skip_from_py_object, module = "catext")]
#[derive(Clone)]
pub struct Diagram {
    values: Values,
}

impl Diagram {
    fn modules(&self) -> PyResult<&DiagramFunctor> {
        match &self.values {
            Values::Modules(d) => Ok(d),
            Values::Int(_) => Err(PyValueError::new_err("this needs coefficients F_p[x]/(x^m), not Z")),
        }
    }
}

fn pair<'a>(f: &'a Diagram, g: Option<&'a Diagram>) -> PyResult<(&'a DiagramFunctor, &'a DiagramFunctor)> {
    let f = f.modules()?;
    let g = match g {
        Some(g) => g.modules()?,
        None => f,
    };
    f.compatible_with(g).map_err(py_err)?;
    Ok((f, g))
}

#[pymethods]
impl Diagram {
    /// Parses the JSON diagram format over `category` and checks functoriality.
    #[staticmethod]
    fn from_json(category: &Category, text: &str) -> PyResult<Self> {
        let file = DiagramFile::parse(text).map_err(py_err)?;
        let base = category.inner.clone();
        let values = match file.coefficient {
            Coefficient::Integers => {
                let f = file.to_functor_int(base).map_err(py_err)?;
                if let Some(v) = f.check().violations.first() {
                    return Err(PyValueError::new_err(v.to_string()));
                }
                Values::Int(f)
            }
            Coefficient::Algebra(_) => {
                let d = file.to_diagram(base).map_err(py_err)?;
                if let Some(v) = check_functor(&d).violations.first() {
                    return Err(PyValueError::new_err(v.to_string()));
                }
                Values::Modules(d)
            }
        };
        Ok(Diagram { values })
    }

    #[staticmethod]
    fn load(category: &Category, path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PyValueError::new_err(format!("{path}: {e}")))?;
        Self::from_json(category, &text)
    }

    /// `"Z"` or `"p,m"`.
    #[getter]
    fn coefficient(&self) -> String {
        match &self.values {
            Values::Int(_) => "Z".into(),
            Values::Modules(d) => format!("{},{}", d.alg().p, d.alg().m),
        }
    }

    /// Dimension over `F_p` (or rank over `Z`) at each object.
    #[getter]
    fn dims(&self) -> Vec<usize> {
        match &self.values {
            Values::Int(f) => f.dims().to_vec(),
            Values::Modules(d) => d.dims(),
        }
    }

    fn to_json(&self) -> PyResult<String> {
        match &self.values {
            Values::Int(f) => Ok(DiagramFile::from_int_functor(f).map_err(py_err)?.to_json()),
            Values::Modules(d) => Ok(DiagramFile::from_functor(d).to_json()),
        }
    }

    fn __repr__(&self) -> String {
        format!("Diagram({}, dims {:?})", self.coefficient(), self.dims())
    }
}

/// `H^n` of the limit complex for `n ≤ degree`.
#[pyfunction]
#[pyo3(signature = (diagram, degree = 3))]
fn limit_cohomology<'py>(py: Python<'py>, diagram: &Diagram, degree: usize) -> PyResult<Bound<'py, PyAny>> {
    let result = match &diagram.values {
        Values::Int(f) => limits(f, degree),
        Values::Modules(d) => limits(&d.underlying(), degree),
    }
    .map_err(py_err)?;
    to_py(py, &result)
}

/// Baues–Wirsching cohomology of `α ↦ Hom(F(dom α), G(cod α))`, or of
/// `α ↦ F(cod α)` when `g` is omitted.
#[pyfunction]
#[pyo3(signature = (f, g = None, degree = 3))]
fn bw_cohomology<'py>(py: Python<'py>, f: &Diagram, g: Option<&Diagram>, degree: usize) -> PyResult<Bound<'py, PyAny>> {
    let result = match (g, &f.values) {
        (Some(g), _) => {
            let (f, g) = pair(f, Some(g))?;
            bw(&hom_natural_system(f, g).map_err(py_err)?, degree)
        }
        (None, values) => {
            let base = match values {
                Values::Int(f) => f.category().clone(),
                Values::Modules(d) => d.base().clone(),
            };
            let factorization = Arc::new(base.factorization().map_err(py_err)?);
            match values {
                Values::Int(f) => bw(&codomain_system(base, factorization, f).map_err(py_err)?, degree),
                Values::Modules(d) => bw(&codomain_system(base, factorization, &d.underlying()).map_err(py_err)?, degree),
            }
        }
    }
    .map_err(py_err)?;
    to_py(py, &result)
}

/// `dim Ext^n(F, G)` for `n ≤ degree` from the bar-resolution oracle.
#[pyfunction]
#[pyo3(signature = (f, g = None, degree = 3))]
fn ext(f: &Diagram, g: Option<&Diagram>, degree: usize) -> PyResult<Vec<usize>> {
    let (f, g) = pair(f, g)?;
    oracle_ext(f, g, degree).map_err(py_err)
}

/// `dim H^n` of the total complex of `Hom(F_*, G)` for `n ≤ degree`.
#[pyfunction]
#[pyo3(signature = (f, g = None, degree = 3))]
fn total_cohomology(f: &Diagram, g: Option<&Diagram>, degree: usize) -> PyResult<Vec<usize>> {
    let (f, g) = pair(f, g)?;
    tot_dims(f, g, degree).map_err(py_err)
}

/// Pages of the spectral sequence for `filtration` `"column"` or `"row"`.
#[pyfunction]
#[pyo3(signature = (f, g = None, degree = 3, filtration = "column"))]
fn spectral_sequence<'py>(
    py: Python<'py>,
    f: &Diagram,
    g: Option<&Diagram>,
    degree: usize,
    filtration: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let filtration = match filtration {
        "column" => Filtration::Column,
        "row" => Filtration::Row,
        other => return Err(PyValueError::new_err(format!("unknown filtration '{other}'"))),
    };
    let (f, g) = pair(f, g)?;
    let resolution = resolve_functor(f, degree + 1).map_err(py_err)?;
    let dc = build_double_complex(f, g, &resolution, degree + 1).map_err(py_err)?;
    to_py(py, &pages(&dc, filtration).map_err(py_err)?)
}

/// The full cross-check of `E_2`, abutment and the oracle; the report's
/// `verdicts.overall` is `"PASS"` or `"FAIL"`.
#[pyfunction]
#[pyo3(signature = (f, g = None, degree = 3))]
fn verify<'py>(py: Python<'py>, f: &Diagram, g: Option<&Diagram>, degree: usize) -> PyResult<Bound<'py, PyAny>> {
    let (f, g) = pair(f, g)?;
    to_py(py, &verify_theorem(f, g, degree).map_err(py_err)?)
}

/// A seeded random `(category, F, G)` over `F_p[x]/(x^m)`.
#[pyfunction]
#[pyo3(signature = (seed, p = 2, m = 2, degree = 3, max_objects = 3))]
fn random_instance(seed: u64, p: u32, m: usize, degree: usize, max_objects: usize) -> PyResult<(Category, Diagram, Diagram)> {
    let bounds = Bounds {
        p,
        m,
        degree,
        max_objects,
        ..Bounds::default()
    };
    let (base, f, g) = draw_instance(seed, &bounds).map_err(py_err)?;
    Ok((
        Category { inner: base },
        Diagram { values: Values::Modules(f) },
        Diagram { values: Values::Modules(g) },
    ))
}

#[pymodule]
fn catext(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Category>()?;
    m.add_class::<Diagram>()?;
    m.add_function(wrap_pyfunction!(limit_cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(bw_cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(ext, m)?)?;
    m.add_function(wrap_pyfunction!(total_cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(random_instance, m)?)?;
    Ok(())
}
