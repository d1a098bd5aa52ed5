//! Python module `wordeq`.
//!
//! Equations, words and valuations are passed as strings. Rational values
//! come back as `fractions.Fraction`; reports come back as plain dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyList;
use serde::Serialize;

use wordeq::campaign::{run_campaign, CampaignConfig};
use wordeq::normalizer::normal_form_of;
use wordeq::reduction::reduce_equation;
use wordeq::solver::{classify_with_bound, default_bound};
use wordeq::threevar::{self, ConstantFreeEquation, EquationSystem, SearchConfig, SolutionMorphism};
use wordeq::{Alphabet, Height, Value, Word};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn word(s: &str) -> PyResult<Word> {
    Word::parse(s).map_err(value_err)
}

fn fraction<'py>(py: Python<'py>, v: Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((*v.numer(), *v.denom()))
}

fn to_python<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Letter valuation, e.g. `Alphabet("a=1,b=-1")`.
#[pyclass(name = "Alphabet", module = "wordeq", frozen)]
struct PyAlphabet {
    inner: Alphabet,
}

#[pymethods]
impl PyAlphabet {
    #[new]
    fn new(values: &str) -> PyResult<Self> {
        Ok(PyAlphabet { inner: Alphabet::parse(values).map_err(value_err)? })
    }

    /// `a=1, b=2, …` over the given letters.
    #[staticmethod]
    fn default_for(letters: &str) -> Self {
        PyAlphabet { inner: Alphabet::default_for(letters.bytes()) }
    }

    fn sum<'py>(&self, py: Python<'py>, w: &str) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.inner.sum(&word(w)?).map_err(value_err)?)
    }

    fn psw<'py>(&self, py: Python<'py>, w: &str) -> PyResult<Bound<'py, PyList>> {
        let p = self.inner.psw(&word(w)?, Value::from_integer(0)).map_err(value_err)?;
        let items = p.values().iter().map(|&v| fraction(py, v)).collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, items)
    }

    /// `None` for the empty word.
    fn height<'py>(&self, py: Python<'py>, w: &str) -> PyResult<Option<Bound<'py, PyAny>>> {
        match self.inner.height(&word(w)?).map_err(value_err)? {
            Height::NegInfinity => Ok(None),
            Height::Finite(v) => fraction(py, v).map(Some),
        }
    }

    fn area<'py>(&self, py: Python<'py>, w: &str) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.inner.area(&word(w)?).map_err(value_err)?)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Alphabet('{}')", self.inner)
    }
}

/// Classified solution set.
#[pyclass(name = "SolutionSet", module = "wordeq", frozen)]
struct PySolutionSet {
    inner: wordeq::SolutionSet,
}

#[pymethods]
impl PySolutionSet {
    /// `"finite"`, `"infinite"` or `"all"`.
    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner {
            wordeq::SolutionSet::All => "all",
            wordeq::SolutionSet::Finite { .. } => "finite",
            wordeq::SolutionSet::Infinite { .. } => "infinite",
        }
    }

    #[getter]
    fn solutions(&self) -> Option<Vec<String>> {
        match &self.inner {
            wordeq::SolutionSet::Finite { solutions } => {
                Some(solutions.iter().map(|w| String::from_utf8_lossy(w.as_bytes()).into_owned()).collect())
            }
            _ => None,
        }
    }

    /// `(p, q)` for the family `(pq)^i p`.
    #[getter]
    fn family(&self) -> Option<(String, String)> {
        match &self.inner {
            wordeq::SolutionSet::Infinite { p, q } => Some((
                String::from_utf8_lossy(p.as_bytes()).into_owned(),
                String::from_utf8_lossy(q.as_bytes()).into_owned(),
            )),
            _ => None,
        }
    }

    fn __contains__(&self, x: &str) -> PyResult<bool> {
        Ok(self.inner.contains(&word(x)?))
    }

    fn members_up_to(&self, max_len: usize) -> Vec<String> {
        self.inner.members_up_to(max_len).iter().map(|w| String::from_utf8_lossy(w.as_bytes()).into_owned()).collect()
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_python(py, &self.inner)
    }

    fn __repr__(&self) -> String {
        format!("SolutionSet({})", self.inner)
    }
}

/// One-variable equation with constants, e.g. `Equation("Xab = abX")`.
#[pyclass(name = "Equation", module = "wordeq", frozen)]
struct PyEquation {
    inner: wordeq::OneVarEquation,
}

#[pymethods]
impl PyEquation {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyEquation { inner: text.parse().map_err(value_err)? })
    }

    fn is_solution(&self, x: &str) -> PyResult<bool> {
        Ok(self.inner.substitute_check(&word(x)?))
    }

    /// Tries every candidate length up to `max_len`, by default the total
    /// token length.
    #[pyo3(signature = (max_len=None))]
    fn classify(&self, max_len: Option<usize>) -> PySolutionSet {
        let bound = max_len.unwrap_or_else(|| default_bound(&self.inner));
        PySolutionSet { inner: classify_with_bound(&self.inner, bound) }
    }

    /// Normal form with its rewrite log; `values` defaults to `a=1, b=2, …`.
    #[pyo3(signature = (values=None))]
    fn normal_form<'py>(&self, py: Python<'py>, values: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
        let nf = normal_form_of(&self.inner, &self.alphabet(values)?).map_err(value_err)?;
        to_python(py, &serde_json::json!({"normal_form": nf, "checks": nf.report()}))
    }

    /// Verdict or violation trace of the reduction chain.
    #[pyo3(signature = (values=None))]
    fn reduce<'py>(&self, py: Python<'py>, values: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
        let outcome = reduce_equation(&self.inner, &self.alphabet(values)?).map_err(value_err)?;
        to_python(py, &outcome)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Equation('{}')", self.inner)
    }
}

impl PyEquation {
    fn alphabet(&self, values: Option<&str>) -> PyResult<Alphabet> {
        Ok(match values {
            Some(v) => Alphabet::parse(v).map_err(value_err)?.extended_with(self.inner.letters()),
            None => Alphabet::default_for(self.inner.letters()),
        })
    }
}

fn system(equations: Vec<String>) -> PyResult<EquationSystem> {
    let parsed =
        equations.iter().map(|e| ConstantFreeEquation::parse(e).map_err(value_err)).collect::<PyResult<Vec<_>>>()?;
    EquationSystem::new(parsed).map_err(value_err)
}

/// Whether `(x, y, z)` solves every equation over `X, Y, Z`.
#[pyfunction]
fn solves_system(equations: Vec<String>, x: &str, y: &str, z: &str) -> PyResult<bool> {
    Ok(system(equations)?.is_solution(&SolutionMorphism::new(word(x)?, word(y)?, word(z)?)))
}

/// Witnesses for every maximal proper subsystem, among morphisms of total
/// image length at most `image_len`.
#[pyfunction]
fn independence_check<'py>(py: Python<'py>, equations: Vec<String>, image_len: usize) -> PyResult<Bound<'py, PyAny>> {
    let s = system(equations)?;
    to_python(py, &py.detach(|| threevar::independence_check(&s, image_len)))
}

#[pyfunction]
#[pyo3(signature = (max_eq_len=8, max_size=3, image_len=6, example_cap=10))]
fn search_independent_systems<'py>(
    py: Python<'py>,
    max_eq_len: usize,
    max_size: usize,
    image_len: usize,
    example_cap: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let config = SearchConfig { max_eq_len, max_size, image_len, example_cap };
    let report = py.detach(|| threevar::search_independent_systems(&config).report);
    to_python(py, &report)
}

/// Exhaustive campaign; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (alphabet_size=2, max_const_len=6, occurrences=2, oracle_len=8, workers=1, lemmas=false))]
fn campaign<'py>(
    py: Python<'py>,
    alphabet_size: usize,
    max_const_len: usize,
    occurrences: usize,
    oracle_len: usize,
    workers: usize,
    lemmas: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let config = CampaignConfig {
        alphabet_size,
        max_const_len,
        occurrences,
        oracle_len,
        workers,
        lemmas,
        ..CampaignConfig::default()
    };
    let report = py.detach(|| run_campaign(&config)).map_err(value_err)?;
    to_python(py, &report)
}

#[pymodule]
#[pyo3(name = "wordeq")]
pub fn wordeq_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAlphabet>()?;
    m.add_class::<PySolutionSet>()?;
    m.add_class::<PyEquation>()?;
    m.add_function(wrap_pyfunction!(solves_system, m)?)?;
    m.add_function(wrap_pyfunction!(independence_check, m)?)?;
    m.add_function(wrap_pyfunction!(search_independent_systems, m)?)?;
    m.add_function(wrap_pyfunction!(campaign, m)?)?;
    Ok(())
}
