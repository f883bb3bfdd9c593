//! Python bindings. Rationals cross the boundary as `"p/q"` strings.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use circuit_core::bounds::{self, BoundLine, Extent, NamedSystem, Verdict};
use circuit_core::search::{self, GridSpec};
use circuit_core::{Ratio, RuleSet};

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn ratio(text: &str) -> PyResult<Ratio> {
    text.parse().map_err(value_err)
}

fn rules(name: &str) -> PyResult<RuleSet> {
    RuleSet::by_name(name).map_err(value_err)
}

fn system(name: &str) -> PyResult<Vec<bounds::LinIneq>> {
    let named: NamedSystem = name.parse().map_err(value_err)?;
    Ok(named.build())
}

fn lines(pairs: Vec<(String, String)>, complement: bool) -> PyResult<Vec<BoundLine>> {
    pairs
        .into_iter()
        .map(|(a, b)| {
            let (a, b) = (ratio(&a)?, ratio(&b)?);
            Ok(if complement { BoundLine::complement(a, b) } else { BoundLine::gamma(a, b) })
        })
        .collect()
}

#[pyclass(name = "Schedule", frozen)]
struct PySchedule {
    inner: circuit_core::Schedule,
}

#[pymethods]
impl PySchedule {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self { inner: circuit_core::parse_schedule(text).map_err(value_err)? })
    }

    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        Ok(Self { inner: circuit_core::builtin(name).map_err(value_err)? })
    }

    fn text(&self) -> String {
        circuit_core::format_schedule(&self.inner)
    }

    #[getter]
    fn phase(&self) -> String {
        self.inner.phase().to_string()
    }

    #[getter]
    fn total_distance(&self) -> String {
        self.inner.total_distance().to_string()
    }

    fn __len__(&self) -> usize {
        self.inner.actions().len()
    }

    fn mirrored(&self) -> Self {
        Self { inner: self.inner.mirrored() }
    }

    fn prefix_through(&self, label: &str) -> Option<Self> {
        self.inner.prefix_through(label).map(|inner| Self { inner })
    }

    #[pyo3(signature = (rules = "FREE"))]
    fn simulate(&self, rules: &str) -> PyResult<Report> {
        Ok(Report { inner: circuit_core::simulate(&self.inner, &self::rules(rules)?) })
    }

    #[pyo3(signature = (claimed, rules = "FREE"))]
    fn verify(&self, claimed: &str, rules: &str) -> PyResult<bool> {
        Ok(circuit_core::verify_total(&self.inner, &self::rules(rules)?, &ratio(claimed)?))
    }

    fn __repr__(&self) -> String {
        format!("Schedule({} actions)", self.inner.actions().len())
    }
}

#[pyclass(frozen)]
struct Report {
    inner: circuit_core::SimReport,
}

#[pymethods]
impl Report {
    #[getter]
    fn feasible(&self) -> bool {
        self.inner.feasible
    }

    #[getter]
    fn total_time(&self) -> String {
        self.inner.total_time.to_string()
    }

    #[getter]
    fn ants_lost(&self) -> String {
        self.inner.ants_lost().to_string()
    }

    #[getter]
    fn marks(&self) -> BTreeMap<String, String> {
        self.inner.marks.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
    }

    #[getter]
    fn caches(&self) -> BTreeMap<String, u64> {
        self.inner.caches.iter().map(|(k, v)| (k.value().to_string(), *v)).collect()
    }

    /// `(kind, clock, detail)` triples.
    #[getter]
    fn violations(&self) -> Vec<(String, String, String)> {
        self.inner
            .violations
            .iter()
            .map(|v| (v.kind.to_string(), v.clock.to_string(), v.detail.clone()))
            .collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }
}

#[pyfunction]
fn builtin_names() -> Vec<&'static str> {
    circuit_core::schedule::builtin_names().collect()
}

/// Checks `t >= a*gamma + b` (or `a*(5 - gamma) + b`) against a named system.
/// Returns `(True, certificate_json)` or `(False, witness)`.
#[pyfunction]
#[pyo3(signature = (system_name, a, b, complement = false))]
fn implies(system_name: &str, a: &str, b: &str, complement: bool) -> PyResult<(bool, String)> {
    let sys = system(system_name)?;
    let line = lines(vec![(a.into(), b.into())], complement)?.remove(0);
    match bounds::implies(&sys, &line, &[]).map_err(value_err)? {
        Verdict::Implied(c) => Ok((true, c.to_json())),
        Verdict::Refuted(r) => {
            let point: Vec<String> = r.point.iter().map(|(k, v)| format!("{k}={v}")).collect();
            Ok((false, point.join(" ")))
        }
    }
}

#[pyfunction]
fn verify_certificate(json: &str) -> PyResult<bool> {
    let c = bounds::Certificate::from_json(json).map_err(value_err)?;
    Ok(c.verify().is_ok())
}

/// `None` when unbounded below.
#[pyfunction]
fn min_t(system_name: &str, gamma: &str) -> PyResult<Option<String>> {
    match bounds::min_t(&system(system_name)?, &ratio(gamma)?).map_err(value_err)? {
        Extent::Finite(v) => Ok(Some(v.to_string())),
        Extent::Unbounded => Ok(None),
    }
}

/// Lines are `(a, b)` pairs; part-A lines in γ, part-B lines in `5 − γ`.
#[pyfunction]
fn compose(a_lines: Vec<(String, String)>, b_lines: Vec<(String, String)>) -> PyResult<(String, String)> {
    let (g, t) = bounds::compose_total(&lines(a_lines, false)?, &lines(b_lines, true)?).map_err(value_err)?;
    Ok((g.to_string(), t.to_string()))
}

fn search_err(e: search::SearchError) -> PyErr {
    match e {
        search::SearchError::TooLarge { .. } | search::SearchError::OffGrid { .. } | search::SearchError::InvalidGrid(_) => {
            value_err(e)
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Farthest reach within the budget: `(value, schedule)`.
#[pyfunction]
#[pyo3(signature = (budget, den = 12, rules = "FREE"))]
fn best_reach(py: Python<'_>, budget: &str, den: u32, rules: &str) -> PyResult<(String, PySchedule)> {
    let budget = ratio(budget)?;
    let rules = self::rules(rules)?;
    let found = py.detach(|| search::best_reach(&budget, &GridSpec::new(den, budget.clone()), &rules)).map_err(search_err)?;
    Ok((found.value.to_string(), PySchedule { inner: found.schedule }))
}

/// Fastest round trip to γ: `(days, schedule)` or `None`.
#[pyfunction]
#[pyo3(signature = (gamma, max_days, den = 2, rules = "FREE"))]
fn roundtrip(py: Python<'_>, gamma: &str, max_days: &str, den: u32, rules: &str) -> PyResult<Option<(String, PySchedule)>> {
    let gamma = ratio(gamma)?;
    let grid = GridSpec::new(den, ratio(max_days)?);
    let rules = self::rules(rules)?;
    let found = py.detach(|| search::roundtrip_search(&gamma, &grid, &rules)).map_err(search_err)?;
    Ok(found.map(|f| (f.value.to_string(), PySchedule { inner: f.schedule })))
}

#[pymodule]
fn circuit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySchedule>()?;
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(builtin_names, m)?)?;
    m.add_function(wrap_pyfunction!(implies, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(min_t, m)?)?;
    m.add_function(wrap_pyfunction!(compose, m)?)?;
    m.add_function(wrap_pyfunction!(best_reach, m)?)?;
    m.add_function(wrap_pyfunction!(roundtrip, m)?)?;
    Ok(())
}
