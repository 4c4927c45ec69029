//! Python bindings: Cantor sets, staircases, Nambu systems, brackets and
//! staircase-time simulation.

use std::cell::RefCell;
use std::collections::BTreeMap;

use fracnambu::dynamics::{integrate_s_time, required_s_max, subordinate, TimeModel};
use fracnambu::fractal;
use fracnambu::nambu::{self, Axiom, NambuSystem, PhasePoint, ScalarField};
use fracnambu::systems::{self, NahmScale, SystemSpec};
use fracnambu::Error;
use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidParameter { .. }
        | Error::OutOfRange { .. }
        | Error::Arity { .. }
        | Error::MissingGradient(_) => PyValueError::new_err(e.to_string()),
        Error::NonFinite(_) | Error::BlowUp { .. } | Error::IllConditioned(_) => {
            PyArithmeticError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn scale(paper_faithful: bool) -> NahmScale {
    if paper_faithful {
        NahmScale::PaperFaithful
    } else {
        NahmScale::DeterminantFaithful
    }
}

#[pyclass(name = "CantorSpec", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCantorSpec(fractal::CantorSpec);

#[pymethods]
impl PyCantorSpec {
    #[new]
    #[pyo3(signature = (c1=0.0, c2=1.0, epsilon=1.0/3.0, c0=None))]
    fn new(c1: f64, c2: f64, epsilon: f64, c0: Option<f64>) -> PyResult<Self> {
        let spec = fractal::CantorSpec::new(c1, c2, epsilon).map_err(to_py)?;
        Ok(Self(match c0 {
            Some(c0) => spec.with_reference(c0).map_err(to_py)?,
            None => spec,
        }))
    }

    #[getter]
    fn c1(&self) -> f64 {
        self.0.c1()
    }

    #[getter]
    fn c2(&self) -> f64 {
        self.0.c2()
    }

    #[getter]
    fn epsilon(&self) -> f64 {
        self.0.epsilon()
    }

    #[getter]
    fn c0(&self) -> f64 {
        self.0.c0()
    }

    fn similarity_dimension(&self) -> f64 {
        self.0.similarity_dimension()
    }

    fn interval_length(&self, level: u32) -> f64 {
        self.0.interval_length(level)
    }

    fn __repr__(&self) -> String {
        format!(
            "CantorSpec(c1={}, c2={}, epsilon={}, c0={})",
            self.0.c1(),
            self.0.c2(),
            self.0.epsilon(),
            self.0.c0()
        )
    }
}

/// Intervals of the depth-`depth` approximation as `(lo, hi)` pairs.
#[pyfunction]
fn build_cantor(spec: &PyCantorSpec, depth: u32) -> PyResult<Vec<(f64, f64)>> {
    let approx = fractal::build_cantor(&spec.0, depth).map_err(to_py)?;
    Ok(approx.intervals().iter().map(|iv| (iv.lo, iv.hi)).collect())
}

#[pyfunction]
#[pyo3(signature = (spec, max_depth=16, tol=fractal::DEFAULT_DIMENSION_TOL))]
fn estimate_dimension(spec: &PyCantorSpec, max_depth: u32, tol: f64) -> PyResult<f64> {
    fractal::estimate_dimension(&spec.0, max_depth, tol).map_err(to_py)
}

/// `(depth, alpha, mu)` rows for depths `0..=max_depth`.
#[pyfunction]
fn measure_table(
    spec: &PyCantorSpec,
    alpha: f64,
    max_depth: u32,
) -> PyResult<Vec<(u32, f64, f64)>> {
    Ok(fractal::measure_table(&spec.0, alpha, max_depth)
        .map_err(to_py)?
        .into_iter()
        .map(|r| (r.depth, r.alpha, r.mu))
        .collect())
}

#[pyclass(name = "Staircase", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyStaircase(fractal::Staircase);

/// Wraps a Python callable as `f64 -> f64`, remembering the first failure.
fn call_real<'a>(
    py: Python<'a>,
    h: &'a Bound<'a, PyAny>,
    err: &'a RefCell<Option<PyErr>>,
) -> impl Fn(f64) -> f64 + 'a {
    let _ = py;
    move |x| match h.call1((x,)).and_then(|v| v.extract::<f64>()) {
        Ok(v) => v,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    }
}

#[pymethods]
impl PyStaircase {
    /// `alpha` defaults to the set's similarity dimension.
    #[new]
    #[pyo3(signature = (spec, alpha=None, depth=fractal::DEFAULT_STAIRCASE_DEPTH))]
    fn new(spec: &PyCantorSpec, alpha: Option<f64>, depth: u32) -> PyResult<Self> {
        let st = match alpha {
            Some(a) => fractal::Staircase::new(spec.0, a, depth),
            None => fractal::Staircase::at_dimension(spec.0, depth),
        };
        st.map(Self).map_err(to_py)
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    #[getter]
    fn depth(&self) -> u32 {
        self.0.depth()
    }

    #[getter]
    fn total_measure(&self) -> f64 {
        self.0.total_measure()
    }

    fn range(&self) -> (f64, f64) {
        self.0.range()
    }

    fn __call__(&self, x: f64) -> PyResult<f64> {
        self.0.eval(x).map_err(to_py)
    }

    fn eval(&self, x: f64) -> PyResult<f64> {
        self.0.eval(x).map_err(to_py)
    }

    fn inverse(&self, s: f64) -> PyResult<f64> {
        self.0.inverse(s).map_err(to_py)
    }

    fn sample(&self, samples: usize) -> Vec<(f64, f64)> {
        self.0.sample(samples)
    }

    /// F^α-derivative of the callable `h` at `x`.
    fn derivative(&self, py: Python<'_>, h: Bound<'_, PyAny>, x: f64) -> PyResult<f64> {
        let err = RefCell::new(None);
        let value = fractal::fractal_derivative(call_real(py, &h, &err), x, &self.0);
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        value.map_err(to_py)
    }

    /// F^α-integral of `h` over `[a, b]` as `(value, lower, upper)`.
    fn integral(
        &self,
        py: Python<'_>,
        h: Bound<'_, PyAny>,
        a: f64,
        b: f64,
    ) -> PyResult<(f64, f64, f64)> {
        let err = RefCell::new(None);
        let value = fractal::fractal_integral(call_real(py, &h, &err), a, b, &self.0);
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        let v = value.map_err(to_py)?;
        Ok((v.value, v.lower, v.upper))
    }
}

#[pyclass(name = "Field", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyField(ScalarField);

#[pymethods]
impl PyField {
    #[staticmethod]
    fn coordinate(n: usize, i: usize) -> PyResult<Self> {
        if i >= n {
            return Err(PyValueError::new_err(format!(
                "coordinate index {i} out of range for n = {n}"
            )));
        }
        Ok(Self(ScalarField::coordinate(n, i)))
    }

    /// Polynomial from `(exponents, coefficient)` terms.
    #[staticmethod]
    fn polynomial(n: usize, terms: Vec<(Vec<u32>, f64)>) -> PyResult<Self> {
        Ok(Self(
            systems::Polynomial::new(n, terms)
                .map_err(to_py)?
                .into_field("p"),
        ))
    }

    #[staticmethod]
    #[pyo3(signature = (seed, n, degree=3))]
    fn random_polynomial(seed: u64, n: usize, degree: u32) -> PyResult<Self> {
        systems::random_polynomial_field(seed, n, degree)
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn arity(&self) -> usize {
        self.0.arity()
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label().to_string()
    }

    fn __call__(&self, p: Vec<f64>) -> PyResult<f64> {
        self.value(p)
    }

    fn value(&self, p: Vec<f64>) -> PyResult<f64> {
        if p.len() != self.0.arity() {
            return Err(to_py(Error::Arity {
                expected: self.0.arity(),
                got: p.len(),
            }));
        }
        Ok(self.0.value(&p))
    }

    fn grad(&self, p: Vec<f64>) -> PyResult<Vec<f64>> {
        if p.len() != self.0.arity() {
            return Err(to_py(Error::Arity {
                expected: self.0.arity(),
                got: p.len(),
            }));
        }
        Ok(self.0.grad(&p))
    }
}

fn unwrap_fields(fields: &[PyRef<'_, PyField>]) -> Vec<ScalarField> {
    fields.iter().map(|f| f.0.clone()).collect()
}

#[pyfunction]
fn nambu_bracket(fields: Vec<PyRef<'_, PyField>>, p: Vec<f64>) -> PyResult<f64> {
    nambu::nambu_bracket(&unwrap_fields(&fields), &p).map_err(to_py)
}

/// Residual of `"skew"` (needs `perm`), `"leibniz"` or `"fundamental"` at `p`.
#[pyfunction]
#[pyo3(signature = (axiom, fields, p, perm=None))]
fn verify_axiom(
    axiom: &str,
    fields: Vec<PyRef<'_, PyField>>,
    p: Vec<f64>,
    perm: Option<Vec<usize>>,
) -> PyResult<f64> {
    let axiom = match (axiom, perm) {
        ("skew", Some(perm)) => Axiom::Skew(perm),
        ("skew", None) => return Err(PyValueError::new_err("skew needs a permutation")),
        ("leibniz", _) => Axiom::Leibniz,
        ("fundamental", _) => Axiom::Fundamental,
        (other, _) => return Err(PyValueError::new_err(format!("unknown axiom `{other}`"))),
    };
    nambu::verify_bracket_axiom(&axiom, &unwrap_fields(&fields), &p).map_err(to_py)
}

/// `[H1, H2, H3, H4]` of the order-4 oscillator on `(p1, p2, x1, x2)`.
#[pyfunction]
fn oscillator4_fields() -> Vec<PyField> {
    systems::harmonic_oscillator_4()
        .into_iter()
        .map(PyField)
        .collect()
}

#[pyclass(name = "System", frozen)]
struct PySystem(NambuSystem);

impl PySystem {
    fn check_point(&self, p: &[f64]) -> PyResult<()> {
        if p.len() == self.0.n() {
            Ok(())
        } else {
            Err(to_py(Error::Arity {
                expected: self.0.n(),
                got: p.len(),
            }))
        }
    }
}

#[pymethods]
impl PySystem {
    /// Built-in system by name (`"euler-top"` or `"nahm"`), parameters by key.
    #[new]
    #[pyo3(signature = (name, parameters=None, paper_faithful=false))]
    fn new(
        name: &str,
        parameters: Option<BTreeMap<String, f64>>,
        paper_faithful: bool,
    ) -> PyResult<Self> {
        let spec = SystemSpec {
            name: name.to_string(),
            parameters: parameters.unwrap_or_default(),
        };
        spec.build(scale(paper_faithful)).map(Self).map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (i1=1.0, i2=2.0, i3=3.0))]
    fn euler_top(i1: f64, i2: f64, i3: f64) -> PyResult<Self> {
        systems::euler_top(i1, i2, i3).map(Self).map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (a1=systems::NAHM_REFERENCE_PARAMS[0], a2=systems::NAHM_REFERENCE_PARAMS[1], a3=systems::NAHM_REFERENCE_PARAMS[2], paper_faithful=false))]
    fn nahm(a1: f64, a2: f64, a3: f64, paper_faithful: bool) -> PyResult<Self> {
        systems::nahm(a1, a2, a3, scale(paper_faithful))
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name().to_string()
    }

    #[getter]
    fn flow_scale(&self) -> f64 {
        self.0.flow_scale()
    }

    fn hamiltonians(&self) -> Vec<PyField> {
        self.0.hamiltonians().iter().cloned().map(PyField).collect()
    }

    fn velocity(&self, p: Vec<f64>) -> PyResult<Vec<f64>> {
        self.check_point(&p)?;
        Ok(self.0.velocity(&p))
    }

    fn invariants(&self, p: Vec<f64>) -> PyResult<Vec<f64>> {
        self.check_point(&p)?;
        Ok(self.0.invariants(&p))
    }

    fn liouville_divergence(&self, p: Vec<f64>) -> PyResult<f64> {
        nambu::liouville_divergence(&self.0, &p).map_err(to_py)
    }

    /// Induced bivector singling out `H_r` (1-based).
    fn bivector(&self, r: usize, p: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        nambu::induced_bivector(&self.0, r, &p).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "System(name={:?}, n={}, flow_scale={})",
            self.0.name(),
            self.0.n(),
            self.0.flow_scale()
        )
    }
}

/// Integrates in staircase time and samples `x(t) = y(S(t))` on `t_grid`.
///
/// `mode` is `"classical"`, `"power-law"` or `"exact-staircase"` (the last
/// needs `staircase`). Returns a dict of `t`, `s`, `states`, `invariants`.
#[pyfunction]
#[pyo3(signature = (system, x0, t_grid, alpha=1.0, mode="power-law", step=1e-3, staircase=None))]
#[allow(clippy::too_many_arguments)]
fn simulate<'py>(
    py: Python<'py>,
    system: &PySystem,
    x0: Vec<f64>,
    t_grid: Vec<f64>,
    alpha: f64,
    mode: &str,
    step: f64,
    staircase: Option<PyRef<'_, PyStaircase>>,
) -> PyResult<Bound<'py, PyDict>> {
    let model = match (mode, staircase) {
        ("classical", _) => TimeModel::Classical,
        ("power-law", _) => TimeModel::power_law(alpha).map_err(to_py)?,
        ("exact-staircase", Some(st)) => TimeModel::ExactStaircase(st.0.clone()),
        ("exact-staircase", None) => {
            return Err(PyValueError::new_err(
                "exact-staircase mode needs a staircase",
            ))
        }
        (other, _) => {
            return Err(PyValueError::new_err(format!(
                "unknown time mode `{other}`"
            )))
        }
    };
    let x0 = PhasePoint::new(x0).map_err(to_py)?;
    let sys = &system.0;
    let traj = py
        .detach(|| -> fracnambu::Result<_> {
            let s_max = required_s_max(&model, &t_grid)?.max(step);
            let path = integrate_s_time(sys, &x0, s_max, step)?;
            subordinate(&path, &model, &t_grid)
        })
        .map_err(to_py)?;
    let out = PyDict::new(py);
    let samples = traj.samples();
    out.set_item("t", samples.iter().map(|s| s.t).collect::<Vec<_>>())?;
    out.set_item("s", samples.iter().map(|s| s.s).collect::<Vec<_>>())?;
    out.set_item(
        "states",
        samples.iter().map(|s| s.state.clone()).collect::<Vec<_>>(),
    )?;
    out.set_item(
        "invariants",
        samples
            .iter()
            .map(|s| s.invariants.clone())
            .collect::<Vec<_>>(),
    )?;
    Ok(out)
}

/// Runs the identity suites; one dict per (suite, seed).
#[pyfunction]
#[pyo3(signature = (seeds=vec![1, 2, 3], tuples=100, points=10, paper_faithful=false))]
fn check<'py>(
    py: Python<'py>,
    seeds: Vec<u64>,
    tuples: usize,
    points: usize,
    paper_faithful: bool,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let results = py
        .detach(|| fracnambu::cli::run_check_suites(&seeds, tuples, points, scale(paper_faithful)))
        .map_err(to_py)?;
    results
        .into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("suite", r.suite)?;
            d.set_item("seed", r.seed)?;
            d.set_item("points", r.points)?;
            d.set_item("max_residual", r.max_residual)?;
            d.set_item("tolerance", r.tolerance)?;
            d.set_item("pass", r.pass)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
#[pyo3(name = "fracnambu")]
fn fracnambu_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCantorSpec>()?;
    m.add_class::<PyStaircase>()?;
    m.add_class::<PyField>()?;
    m.add_class::<PySystem>()?;
    m.add_function(wrap_pyfunction!(build_cantor, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(measure_table, m)?)?;
    m.add_function(wrap_pyfunction!(nambu_bracket, m)?)?;
    m.add_function(wrap_pyfunction!(verify_axiom, m)?)?;
    m.add_function(wrap_pyfunction!(oscillator4_fields, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    Ok(())
}
