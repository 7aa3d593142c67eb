use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ::lashof::classify::classification_table;
use ::lashof::config::ContextConfig;
use ::lashof::graded::GeneratorSpec;
use ::lashof::op_expr::{adem_normalize, parse_ops, OpSeq, Strategy};
use ::lashof::r_algebra::{find_isomorphisms, kill_element, AlgebraPresentation};
use ::lashof::scenario::{builtin, ScenarioParams};
use ::lashof::steenrod::{default_bound, Basis, Side};
use ::lashof::unstable::enumerate_generators;
use ::lashof::{Error, Prime};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn prime(p: u32) -> PyResult<Prime> {
    Prime::new(p).map_err(py_err)
}

fn side(name: &str) -> PyResult<Side> {
    name.parse().map_err(py_err)
}

fn basis(name: &str) -> PyResult<Basis> {
    match name {
        "milnor" => Ok(Basis::Milnor),
        "zeta" => Ok(Basis::Zeta),
        other => Err(PyValueError::new_err(format!("unknown basis `{other}`"))),
    }
}

/// The truncated dual Steenrod algebra with its two operation tables.
#[pyclass(module = "lashof", frozen)]
struct SteenrodDual {
    inner: ::lashof::steenrod::SteenrodDual,
}

#[pymethods]
impl SteenrodDual {
    #[new]
    #[pyo3(signature = (p, bound = None))]
    fn new(p: u32, bound: Option<u32>) -> PyResult<Self> {
        let p = prime(p)?;
        let inner = ::lashof::steenrod::SteenrodDual::new(p, bound.unwrap_or_else(|| default_bound(p)))
            .map_err(py_err)?;
        Ok(SteenrodDual { inner })
    }

    #[getter]
    fn prime(&self) -> u32 {
        self.inner.prime().value()
    }

    #[getter]
    fn bound(&self) -> u32 {
        self.inner.bound()
    }

    /// Evaluate an expression such as `"Q^2 xi1"`.
    #[pyo3(signature = (expr, side = "left", basis = "milnor"))]
    fn eval(&self, expr: &str, side: &str, basis: &str) -> PyResult<String> {
        let ctx = self.inner.context(self::side(side)?);
        let x = ::lashof::op_expr::evaluate(&::lashof::op_expr::parse(expr).map_err(py_err)?, &ctx)
            .map_err(py_err)?;
        Ok(self.inner.render(&x, self::basis(basis)?))
    }

    fn chi(&self, expr: &str) -> PyResult<String> {
        let ctx = self.inner.context(Side::Left);
        let x = ::lashof::op_expr::evaluate(&::lashof::op_expr::parse(expr).map_err(py_err)?, &ctx)
            .map_err(py_err)?;
        Ok(self.inner.chi(&x).to_string())
    }

    /// `(checked, failures)` for the Adem and antipode checks on the table.
    fn coherence(&self) -> (usize, Vec<String>) {
        let r = self.inner.coherence_report();
        (r.checked, r.failures)
    }

    fn __repr__(&self) -> String {
        format!("SteenrodDual(p={}, bound={})", self.prime(), self.bound())
    }
}

/// A graded-commutative algebra with recorded operation values.
#[pyclass(module = "lashof", frozen)]
struct Presentation {
    inner: AlgebraPresentation,
}

#[pymethods]
impl Presentation {
    #[new]
    #[pyo3(signature = (p, bound, generators, relations = Vec::new(), q_values = Vec::new()))]
    fn new(
        p: u32,
        bound: u32,
        generators: Vec<(String, u32)>,
        relations: Vec<String>,
        q_values: Vec<(String, String, String)>,
    ) -> PyResult<Self> {
        let gens = generators.into_iter().map(|(n, d)| GeneratorSpec::new(n, d)).collect();
        let rels: Vec<&str> = relations.iter().map(String::as_str).collect();
        let qs: Vec<(&str, &str, &str)> = q_values
            .iter()
            .map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str()))
            .collect();
        let inner = AlgebraPresentation::from_strings(prime(p)?, bound, gens, &rels, &qs).map_err(py_err)?;
        Ok(Presentation { inner })
    }

    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        match ContextConfig::from_toml(text).and_then(|c| c.build()).map_err(py_err)? {
            ::lashof::config::Context::Presentation { pres, .. } => Ok(Presentation { inner: pres }),
            _ => Err(PyValueError::new_err("expected kind = \"presentation\"")),
        }
    }

    /// The truncation of the dual Steenrod algebra with one side's operation values.
    #[staticmethod]
    #[pyo3(signature = (p, bound, side = "left"))]
    fn from_dual(p: u32, bound: u32, side: &str) -> PyResult<Self> {
        let p = prime(p)?;
        let dual = ::lashof::steenrod::SteenrodDual::new(p, bound).map_err(py_err)?;
        let inner = AlgebraPresentation::from_dual(&dual, self::side(side)?, bound).map_err(py_err)?;
        Ok(Presentation { inner })
    }

    fn poincare_series(&self) -> Vec<usize> {
        self.inner.poincare_series()
    }

    fn reduce(&self, expr: &str) -> PyResult<String> {
        let x = self.inner.parse_element(expr).map_err(py_err)?;
        Ok(self.inner.reduce(&x).to_string())
    }

    /// `Q^s x` if the recorded data determine it, else `None`.
    fn q(&self, op: &str, arg: &str) -> PyResult<Option<String>> {
        let op = op.parse().map_err(py_err)?;
        let x = self.inner.parse_element(arg).map_err(py_err)?;
        Ok(self.inner.q(op, &x).map_err(py_err)?.value().map(|v| v.to_string()))
    }

    fn truncate(&self, n: u32) -> PyResult<Self> {
        Ok(Presentation {
            inner: self.inner.postnikov_truncate(n).map_err(py_err)?,
        })
    }

    /// Kill a top-degree class.
    fn kill(&self, expr: &str) -> PyResult<Self> {
        let x = self.inner.parse_element(expr).map_err(py_err)?;
        Ok(Presentation {
            inner: kill_element(&self.inner, &x).map_err(py_err)?.ring,
        })
    }

    fn without_q_data(&self) -> Self {
        Presentation {
            inner: self.inner.without_q_data(),
        }
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner.report()).expect("serializable")
    }

    fn __repr__(&self) -> String {
        let r = self.inner.report();
        format!("Presentation(p={}, bound={}, poincare={:?})", r.prime, r.bound, r.poincare)
    }
}

/// Every isomorphism respecting the recorded operations, as generator-image lists.
#[pyfunction]
fn isomorphisms(x: &Presentation, y: &Presentation) -> PyResult<Vec<Vec<(String, String)>>> {
    let isos = find_isomorphisms(&x.inner, &y.inner).map_err(py_err)?;
    Ok(isos.iter().map(|i| i.forward.describe(&x.inner)).collect())
}

#[pyfunction]
#[pyo3(signature = (word, p = 2))]
fn normalize(word: &str, p: u32) -> PyResult<String> {
    let seq = OpSeq::new(prime(p)?, parse_ops(word).map_err(py_err)?).map_err(py_err)?;
    Ok(adem_normalize(&seq, Strategy::LeftFirst).to_string())
}

/// Generators of the free unstable algebra as `(word, degree)`.
#[pyfunction]
fn free_generators(p: u32, generators: Vec<(String, u32)>, bound: u32) -> PyResult<Vec<(String, u32)>> {
    let gens: Vec<GeneratorSpec> = generators.into_iter().map(|(n, d)| GeneratorSpec::new(n, d)).collect();
    Ok(enumerate_generators(prime(p)?, &gens, bound)
        .iter()
        .map(|w| (w.to_string(), w.degree))
        .collect())
}

#[pyfunction]
fn classify(p: u32, n_max: u32) -> PyResult<String> {
    Ok(serde_json::to_string(&classification_table(prime(p)?, n_max)).expect("serializable"))
}

/// Run a built-in scenario; returns `(passed, report_json)`.
#[pyfunction]
fn run_scenario(name: &str) -> PyResult<(bool, String)> {
    let report = builtin(name, ScenarioParams::default()).map_err(py_err)?.run();
    Ok((report.pass, serde_json::to_string(&report).expect("serializable")))
}

#[pymodule]
fn lashof(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<SteenrodDual>()?;
    m.add_class::<Presentation>()?;
    m.add_function(wrap_pyfunction!(isomorphisms, m)?)?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(free_generators, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    Ok(())
}
