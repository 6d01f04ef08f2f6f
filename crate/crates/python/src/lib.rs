//! Python bindings: load models, run checks, and work with signals directly.
//!
//! ```python
//! import ctxcheck_py as cc
//! m = cc.Model.parse("species A\ninit A = 1\nreaction A -> 0 @ 1\ncontext Q { A = 1 }")
//! r = m.check("G[0,1](Q |> F[0,1]([A] < 0.8))", mode="pointwise")
//! assert r.verdict is True
//! ```

use std::path::PathBuf;

use ctxcheck::cli::{render_report, Model as CoreModel, OutputFormat};
use ctxcheck::numerics::{self, Step};
use ctxcheck::{parse_formula, CheckConfig, CheckReport, Checker, Logic, Mode, Signal3, Truth};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(
    ctxcheck_py,
    CheckError,
    PyValueError,
    "Raised for any model, formula or checking error."
);

fn err(e: ctxcheck::Error) -> PyErr {
    CheckError::new_err(e.to_string())
}

fn truth_code(v: Truth) -> String {
    v.code().to_string()
}

fn parse_truth(code: &str) -> PyResult<Truth> {
    match code {
        "T" => Ok(Truth::True),
        "F" => Ok(Truth::False),
        "?" => Ok(Truth::Unknown),
        other => Err(PyValueError::new_err(format!(
            "truth value must be T, F or ?, got {other:?}"
        ))),
    }
}

fn logic(strict: bool) -> Logic {
    if strict {
        Logic::Strict
    } else {
        Logic::Kleene
    }
}

/// A three-valued piecewise-constant signal over `[0, len)`.
#[pyclass(name = "Signal", module = "ctxcheck_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PySignal {
    inner: Signal3,
}

#[pymethods]
impl PySignal {
    /// `pieces` is a list of `(from, to, value)` with value one of "T", "F", "?".
    #[new]
    fn new(length: f64, pieces: Vec<(f64, f64, String)>) -> PyResult<Self> {
        let pieces = pieces
            .into_iter()
            .map(|(a, b, v)| Ok((a, b, parse_truth(&v)?)))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PySignal {
            inner: Signal3::new(length, &pieces).map_err(err)?,
        })
    }

    #[getter]
    fn length(&self) -> f64 {
        self.inner.len()
    }

    #[getter]
    fn pieces(&self) -> Vec<(f64, f64, String)> {
        self.inner
            .pieces()
            .iter()
            .map(|p| (p.from, p.to, truth_code(p.value)))
            .collect()
    }

    fn value_at(&self, t: f64) -> PyResult<String> {
        Ok(truth_code(self.inner.value_at(t).map_err(err)?))
    }

    fn negate(&self) -> Self {
        PySignal {
            inner: self.inner.negate(),
        }
    }

    #[pyo3(signature = (other, strict = false))]
    fn conjoin(&self, other: &PySignal, strict: bool) -> PyResult<Self> {
        let inner = self
            .inner
            .conjoin(&other.inner, logic(strict))
            .map_err(err)?;
        Ok(PySignal { inner })
    }

    #[pyo3(signature = (other, strict = false))]
    fn disjoin(&self, other: &PySignal, strict: bool) -> PyResult<Self> {
        let inner = self
            .inner
            .disjoin(&other.inner, logic(strict))
            .map_err(err)?;
        Ok(PySignal { inner })
    }

    fn eventually(&self, a: f64, b: f64) -> PyResult<Self> {
        Ok(PySignal {
            inner: self.inner.eventually(a, b).map_err(err)?,
        })
    }

    fn globally(&self, a: f64, b: f64) -> PyResult<Self> {
        Ok(PySignal {
            inner: self.inner.globally(a, b).map_err(err)?,
        })
    }

    #[pyo3(signature = (other, a, b, strict = false))]
    fn until(&self, other: &PySignal, a: f64, b: f64, strict: bool) -> PyResult<Self> {
        let inner = self
            .inner
            .until(&other.inner, a, b, logic(strict))
            .map_err(err)?;
        Ok(PySignal { inner })
    }

    fn __eq__(&self, other: &PySignal) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Signal({})", self.inner)
    }
}

/// Outcome of a check.
#[pyclass(name = "Report", module = "ctxcheck_py", frozen)]
pub struct PyReport {
    inner: CheckReport,
}

#[pymethods]
impl PyReport {
    /// `True`, `False`, or `None` when unknown.
    #[getter]
    fn verdict(&self) -> Option<bool> {
        self.inner.verdict.to_bool()
    }

    #[getter]
    fn signal(&self) -> PySignal {
        PySignal {
            inner: self.inner.signal.clone(),
        }
    }

    #[getter]
    fn solver_calls(&self) -> u64 {
        self.inner.solver_calls
    }

    #[getter]
    fn tube_calls(&self) -> u64 {
        self.inner.tube_calls
    }

    #[getter]
    fn wall_ms(&self) -> u64 {
        self.inner.wall_ms
    }

    fn to_json(&self) -> String {
        render_report(&self.inner, OutputFormat::Json)
            .trim_end()
            .to_string()
    }

    fn __str__(&self) -> String {
        render_report(&self.inner, OutputFormat::Text)
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(verdict={}, solver_calls={}, tube_calls={})",
            self.inner.verdict, self.inner.solver_calls, self.inner.tube_calls
        )
    }
}

/// A reaction network with its initial state and named contexts.
#[pyclass(name = "Model", module = "ctxcheck_py", frozen)]
pub struct PyModel {
    inner: CoreModel,
}

#[pymethods]
impl PyModel {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyModel {
            inner: CoreModel::parse(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(PyModel {
            inner: CoreModel::load(&path).map_err(err)?,
        })
    }

    #[getter]
    fn species(&self) -> Vec<String> {
        self.inner.network.species().names().to_vec()
    }

    #[getter]
    fn contexts(&self) -> Vec<String> {
        self.inner.contexts.keys().cloned().collect()
    }

    /// Initial concentrations in species order.
    #[getter]
    fn init(&self) -> Vec<f64> {
        self.inner.init.conc().to_vec()
    }

    /// Checks `formula` at the initial state.
    #[pyo3(signature = (formula, rho = 0.01, theta = 0.05, horizon = 10.0, mode = "sensitive", strict = false, h_max = None))]
    #[allow(clippy::too_many_arguments)]
    fn check(
        &self,
        py: Python<'_>,
        formula: &str,
        rho: f64,
        theta: f64,
        horizon: f64,
        mode: &str,
        strict: bool,
        h_max: Option<f64>,
    ) -> PyResult<PyReport> {
        let mode = match mode {
            "pointwise" => Mode::Pointwise,
            "sensitive" => Mode::Sensitive,
            other => {
                return Err(PyValueError::new_err(format!(
                    "mode must be pointwise or sensitive, got {other:?}"
                )))
            }
        };
        let cfg = CheckConfig {
            rho,
            theta,
            horizon,
            mode,
            logic: logic(strict),
            h_max,
        };
        let phi = parse_formula(formula, &self.inner.env(), Some(horizon)).map_err(err)?;
        let init = &self.inner.init;
        let report = py
            .detach(|| Checker::new(cfg).and_then(|mut ck| ck.check(init, &phi)))
            .map_err(err)?;
        Ok(PyReport { inner: report })
    }

    /// Sample times and states of the trajectory from the initial state.
    #[pyo3(signature = (t, rho = 0.01))]
    fn trace(&self, t: f64, rho: f64) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
        let tr = numerics::trace_process(&self.inner.init, t, Step::new(rho)).map_err(err)?;
        Ok((tr.times, tr.states))
    }

    /// First-order growth `(t, δ)` of an `eps`-ball around the initial state.
    #[pyo3(signature = (eps, t, rho = 0.01))]
    fn expansion(&self, eps: f64, t: f64, rho: f64) -> PyResult<Vec<(f64, f64)>> {
        numerics::expansion(
            &self.inner.network,
            self.inner.init.conc(),
            eps,
            t,
            Step::new(rho),
        )
        .map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Model(species={:?}, contexts={:?})",
            self.inner.network.species().names(),
            self.inner.contexts.keys().collect::<Vec<_>>()
        )
    }
}

/// Centre and radius of a ball enclosing every point.
#[pyfunction]
fn bounding_ball(points: Vec<Vec<f64>>) -> PyResult<(Vec<f64>, f64)> {
    if let Some(p) = points.iter().find(|p| p.len() != points[0].len()) {
        return Err(PyValueError::new_err(format!(
            "point {p:?} has the wrong dimension"
        )));
    }
    let b = numerics::bounding_ball(&points).map_err(err)?;
    Ok((b.center, b.radius))
}

#[pymodule]
fn ctxcheck_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PySignal>()?;
    m.add_function(wrap_pyfunction!(bounding_ball, m)?)?;
    m.add("CheckError", m.py().get_type::<CheckError>())?;
    Ok(())
}
