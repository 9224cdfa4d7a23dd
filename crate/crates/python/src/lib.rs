//! Python bindings: a `Model` class wrapping a weighted step set, plus the
//! corpus scan. Reports come back as plain dicts, rationals as `Fraction`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyList;

use quadwalk_core::algebra::{format_rational, parse_rational, Rational};
use quadwalk_core::classify::{self, Bounds, ModelInput};
use quadwalk_core::curve::{base_points, genus};
use quadwalk_core::decouple::{decouple_xy, normalize_certificate, DecouplingOutcome, DenominatorMode, SearchBounds};
use quadwalk_core::enumerate::{counting_series, guess_algebraic, guess_ode, verify_feq, OVERDETERMINATION};
use quadwalk_core::group::group_report;
use quadwalk_core::model::{build_kernel, WeightedModel};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn check_terms(n: usize) -> PyResult<()> {
    if n > classify::MAX_SERIES_ORDER {
        return Err(value_error(format!("terms = {n} exceeds the cap {}", classify::MAX_SERIES_ORDER)));
    }
    Ok(())
}

/// Serializes through JSON and loads the result as Python objects.
fn to_py<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(value_error)?;
    py.import("json")?.call_method1("loads", (s,))
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format_rational(r),))
}

fn weight_of(w: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(n) = w.extract::<i64>() {
        return Ok(Rational::from_integer(n.into()));
    }
    if w.is_instance_of::<pyo3::types::PyFloat>() {
        return Err(value_error("float weights are not exact; use a string \"p/q\" or a Fraction"));
    }
    let s = w.str()?.to_string();
    parse_rational(&s).ok_or_else(|| value_error(format!("weight {s:?} is not a rational")))
}

/// A weighted small-step model.
#[pyclass(name = "Model", module = "quadwalk", frozen)]
struct PyModel {
    inner: WeightedModel,
}

#[pymethods]
impl PyModel {
    /// `steps` is a list of `(dx, dy)` or `(dx, dy, weight)`; weights may be
    /// ints, `Fraction`s or `"p/q"` strings.
    #[new]
    fn new(steps: &Bound<'_, PyList>) -> PyResult<Self> {
        let mut out = Vec::with_capacity(steps.len());
        for item in steps.iter() {
            let (dx, dy, w): (i64, i64, Rational) = if let Ok((dx, dy)) = item.extract::<(i64, i64)>() {
                (dx, dy, Rational::from_integer(1.into()))
            } else {
                let (dx, dy, w): (i64, i64, Bound<'_, PyAny>) = item.extract()?;
                (dx, dy, weight_of(&w)?)
            };
            out.push(((dx, dy), w));
        }
        WeightedModel::new(out).map(|inner| PyModel { inner }).map_err(value_error)
    }

    /// Unweighted model from an 8-bit step mask.
    #[staticmethod]
    fn from_mask(mask: u8) -> PyResult<Self> {
        WeightedModel::from_mask(mask)
            .map(|inner| PyModel { inner })
            .ok_or_else(|| value_error("mask must be nonzero"))
    }

    /// Model from the JSON input format used by the CLI.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let input = classify::parse_input(text).map_err(value_error)?;
        Ok(PyModel {
            inner: input.model().map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn simple() -> Self {
        PyModel { inner: WeightedModel::simple() }
    }

    #[staticmethod]
    fn kreweras() -> Self {
        PyModel { inner: WeightedModel::kreweras() }
    }

    #[staticmethod]
    fn gessel() -> Self {
        PyModel { inner: WeightedModel::gessel() }
    }

    #[staticmethod]
    fn king() -> Self {
        PyModel { inner: WeightedModel::king() }
    }

    /// `[(dx, dy, Fraction)]`.
    #[getter]
    fn steps<'py>(&self, py: Python<'py>) -> PyResult<Vec<(i8, i8, Bound<'py, PyAny>)>> {
        self.inner
            .steps()
            .map(|(s, w)| Ok((s.dx, s.dy, fraction(py, w)?)))
            .collect()
    }

    fn transpose(&self) -> Self {
        PyModel {
            inner: self.inner.transpose(),
        }
    }

    /// Full report as a dict.
    #[pyo3(signature = (group_n = 12, decouple_degree = 6, series_order = 60, max_degree = 20))]
    fn classify<'py>(
        &self,
        py: Python<'py>,
        group_n: usize,
        decouple_degree: usize,
        series_order: usize,
        max_degree: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let bounds = Bounds {
            group_n,
            decouple_degree,
            series_order,
            max_degree,
        };
        bounds.check().map_err(value_error)?;
        let m = self.inner.clone();
        let r = py.detach(move || classify::classify(&m, bounds));
        to_py(py, &r)
    }

    /// `"Zero"` or `"One"`.
    fn genus(&self) -> PyResult<String> {
        genus(&build_kernel(&self.inner))
            .map(|g| format!("{:?}", g.genus))
            .map_err(value_error)
    }

    #[pyo3(signature = (bound = 12, max_degree = 20))]
    fn group<'py>(&self, py: Python<'py>, bound: usize, max_degree: usize) -> PyResult<Bound<'py, PyAny>> {
        let k = build_kernel(&self.inner);
        let r = py.detach(move || group_report(&k, bound, max_degree));
        to_py(py, &r)
    }

    /// Normalized certificate as a dict, or `None` within the bounds.
    #[pyo3(signature = (degree = 6, mode = "disc"))]
    fn decouple<'py>(&self, py: Python<'py>, degree: usize, mode: &str) -> PyResult<Option<Bound<'py, PyAny>>> {
        let mode = match mode {
            "disc" => DenominatorMode::DiscriminantFactors,
            "laurent" => DenominatorMode::LaurentOnly,
            other => return Err(value_error(format!("mode must be \"disc\" or \"laurent\", not {other:?}"))),
        };
        if degree > quadwalk_core::decouple::MAX_LAURENT_DEGREE {
            return Err(value_error("degree exceeds the cap"));
        }
        let k = build_kernel(&self.inner);
        match py.detach(move || decouple_xy(&k, SearchBounds::new(degree, mode))) {
            DecouplingOutcome::Found(c) => Ok(Some(to_py(py, &normalize_certificate(&c))?)),
            DecouplingOutcome::NoneUpToBounds(_) => Ok(None),
        }
    }

    fn base_points<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let pts = base_points(&build_kernel(&self.inner)).map_err(value_error)?;
        to_py(py, &pts)
    }

    /// `(Q(1,1;t), Q(0,0;t))` coefficients as lists of `Fraction`.
    #[allow(clippy::type_complexity)]
    fn counts<'py>(&self, py: Python<'py>, terms: usize) -> PyResult<(Vec<Bound<'py, PyAny>>, Vec<Bound<'py, PyAny>>)> {
        check_terms(terms)?;
        if terms == 0 {
            return Ok((vec![], vec![]));
        }
        let m = self.inner.clone();
        let s = py.detach(move || counting_series(&m, terms - 1));
        let conv = |v: &[Rational]| v.iter().map(|c| fraction(py, c)).collect::<PyResult<Vec<_>>>();
        Ok((conv(s.q11.coeffs())?, conv(s.q00.coeffs())?))
    }

    /// Whether the kernel equation holds modulo `t^terms`.
    fn verify_feq(&self, py: Python<'_>, terms: usize) -> PyResult<bool> {
        check_terms(terms)?;
        let m = self.inner.clone();
        Ok(py.detach(move || verify_feq(&m, terms).holds()))
    }

    /// `target` is `"q00"` or `"q11"`, `kind` is `"ode"` or `"algebraic"`.
    #[pyo3(signature = (target, kind, terms = 100, order = 3, degree = None))]
    fn guess<'py>(
        &self,
        py: Python<'py>,
        target: &str,
        kind: &str,
        terms: usize,
        order: usize,
        degree: Option<usize>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let q00 = match target {
            "q00" => true,
            "q11" => false,
            other => return Err(value_error(format!("unknown target {other:?}"))),
        };
        let ode = match kind {
            "ode" => true,
            "algebraic" => false,
            other => return Err(value_error(format!("unknown kind {other:?}"))),
        };
        check_terms(terms)?;
        let degree = degree.unwrap_or_else(|| (terms.saturating_sub(OVERDETERMINATION) / 4).saturating_sub(1));
        let m = self.inner.clone();
        let r = py
            .detach(move || {
                let s = counting_series(&m, terms.saturating_sub(1));
                let series = if q00 { &s.q00 } else { &s.q11 };
                if ode {
                    guess_ode(series, order, degree)
                } else {
                    guess_algebraic(series, order, degree)
                }
            })
            .map_err(value_error)?;
        to_py(py, &r)
    }

    /// The model in the JSON input format.
    fn to_json(&self) -> String {
        serde_json::to_string(&ModelInput::new(&self.inner, Bounds::default())).expect("inputs serialize")
    }

    fn __repr__(&self) -> String {
        format!("Model({})", self.inner)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }
}

/// Classifies all 255 unweighted step sets; `entries` adds one row per model.
#[pyfunction]
#[pyo3(signature = (entries = false))]
fn corpus(py: Python<'_>, entries: bool) -> PyResult<Bound<'_, PyAny>> {
    let bounds = Bounds {
        series_order: 0,
        ..Bounds::default()
    };
    let mut s = py.detach(move || classify::run_corpus(bounds));
    if !entries {
        s.entries.clear();
    }
    to_py(py, &s)
}

#[pymodule]
fn quadwalk(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(corpus, m)?)?;
    Ok(())
}
