//! Python bindings: constructions, correlation profiles, bridges, bounds.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tpsig_core::bounds::{self, Alphabet, BoundQuery};
use tpsig_core::characters::{self, AdditiveCharacter, MultiplicativeCharacter};
use tpsig_core::constructions;
use tpsig_core::field::make_field;
use tpsig_core::json;
use tpsig_core::signal::{self, SetMeta, Signal};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_alphabet(s: &str) -> PyResult<Alphabet> {
    s.parse().map_err(PyValueError::new_err)
}

/// Correlation profile of a signal set. `lambda_` stands in for the
/// reserved word.
#[pyclass(frozen, name = "Profile", module = "tpsig")]
struct PyProfile {
    inner: signal::CorrelationProfile,
}

#[pymethods]
impl PyProfile {
    #[getter]
    fn nu(&self) -> f64 {
        self.inner.nu
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.inner.theta
    }

    #[getter]
    fn lambda_(&self) -> f64 {
        self.inner.lambda
    }

    #[getter]
    fn witness_nu(&self) -> Option<(usize, usize)> {
        self.inner.witness_nu
    }

    #[getter]
    fn witness_theta(&self) -> Option<(usize, usize, usize)> {
        self.inner.witness_theta
    }

    #[getter]
    fn witness_lambda(&self) -> Option<(usize, usize, usize, usize)> {
        self.inner.witness_lambda
    }

    #[getter]
    fn papr_max(&self) -> f64 {
        self.inner.papr_max
    }

    fn __repr__(&self) -> String {
        format!(
            "Profile(nu={:.9}, theta={:.9}, lambda={:.9})",
            self.inner.nu, self.inner.theta, self.inner.lambda
        )
    }
}

#[pyclass(frozen, name = "SignalSet", module = "tpsig")]
struct PySignalSet {
    inner: signal::SignalSet,
}

#[pymethods]
impl PySignalSet {
    /// Builds a set from rows of complex numbers; validates unit norm and
    /// distinctness.
    #[new]
    fn new(signals: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let signals = signals
            .into_iter()
            .map(Signal::new)
            .collect::<Result<Vec<_>, _>>()
            .map_err(value_error)?;
        let inner = signal::SignalSet::new(signals, SetMeta::external()).map_err(value_error)?;
        Ok(PySignalSet { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PySignalSet {
            inner: json::read_set_json(text).map_err(value_error)?,
        })
    }

    fn to_json(&self) -> String {
        json::write_set_json(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter(M)]
    fn count(&self) -> usize {
        self.inner.len()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn construction(&self) -> String {
        self.inner.meta().construction.clone()
    }

    fn signals(&self) -> Vec<Vec<Complex64>> {
        self.inner.signals().iter().map(|s| s.values().to_vec()).collect()
    }

    fn profile(&self, py: Python<'_>) -> PyProfile {
        let set = &self.inner;
        PyProfile {
            inner: py.detach(|| signal::profile(set)),
        }
    }

    fn bridge_full(&self) -> PyResult<Self> {
        Ok(PySignalSet {
            inner: signal::bridge_full(&self.inner).map_err(value_error)?,
        })
    }

    fn bridge_phase(&self) -> PyResult<Self> {
        Ok(PySignalSet {
            inner: signal::bridge_phase(&self.inner).map_err(value_error)?,
        })
    }

    /// (value, (j, j')) for the plain cross-correlation.
    fn nu(&self) -> (f64, Option<(usize, usize)>) {
        signal::nu(&self.inner)
    }

    /// (value, (j, j', tau)) for the shift-only correlation.
    fn theta(&self) -> (f64, Option<(usize, usize, usize)>) {
        signal::theta(&self.inner)
    }

    /// Closed-form check of a constructed set; raises on failure.
    fn verify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let v = constructions::verify_construction(&self.inner).map_err(value_error)?;
        let d = PyDict::new(py);
        d.set_item("construction", v.construction)?;
        d.set_item("n", v.n)?;
        d.set_item("M", v.m)?;
        d.set_item("e", v.e)?;
        d.set_item("lambda_measured", v.lambda_measured)?;
        d.set_item("lambda_formula", v.lambda_formula)?;
        d.set_item("witness_lambda", v.witness_lambda)?;
        d.set_item("degenerate", v.degenerate)?;
        if let Some(c) = v.cases {
            d.set_item("one_over_n_case", format!("{:?}", c.one_over_n_case))?;
            d.set_item("three_valued", c.three_valued)?;
        }
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "SignalSet(n={}, M={}, construction='{}')",
            self.inner.n(),
            self.inner.len(),
            self.inner.meta().construction
        )
    }
}

#[pyfunction]
fn construct_gauss(p: u64, m: u32) -> PyResult<PySignalSet> {
    Ok(PySignalSet {
        inner: constructions::construct_gauss(p, m).map_err(value_error)?,
    })
}

#[pyfunction]
fn construct_cyclotomic(p: u64, m: u32, e: u64) -> PyResult<PySignalSet> {
    Ok(PySignalSet {
        inner: constructions::construct_cyclotomic(p, m, e).map_err(value_error)?,
    })
}

#[pyfunction]
#[pyo3(signature = (n, m, seed))]
fn random_unit_set(n: usize, m: usize, seed: u64) -> PyResult<PySignalSet> {
    Ok(PySignalSet {
        inner: signal::random_unit_set(n, m, seed).map_err(value_error)?,
    })
}

/// List of bound rows as dicts with name, kind, value, applicable, note.
#[pyfunction]
#[pyo3(signature = (n, m, alphabet = "complex", k = None, lambda_ = None))]
fn bound_table<'py>(
    py: Python<'py>,
    n: u64,
    m: u64,
    alphabet: &str,
    k: Option<u32>,
    lambda_: Option<f64>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let query = BoundQuery::new(n, m, parse_alphabet(alphabet)?, k).map_err(value_error)?;
    let entries = bounds::bound_table(&query, lambda_).map_err(value_error)?;
    entries
        .into_iter()
        .map(|e| {
            let d = PyDict::new(py);
            d.set_item("name", e.name)?;
            d.set_item("kind", e.kind.as_str())?;
            d.set_item("value", e.value)?;
            d.set_item("applicable", e.applicable)?;
            d.set_item("note", e.note)?;
            Ok(d)
        })
        .collect()
}

/// Verdict and supporting numbers for a set against every applicable bound.
#[pyfunction]
#[pyo3(signature = (set, alphabet = "complex"))]
fn judge<'py>(py: Python<'py>, set: &PySignalSet, alphabet: &str) -> PyResult<Bound<'py, PyDict>> {
    let query = BoundQuery::new(
        set.inner.n() as u64,
        set.inner.len() as u64,
        parse_alphabet(alphabet)?,
        None,
    )
    .map_err(value_error)?;
    let prof = signal::profile(&set.inner);
    let r = bounds::judge(&prof, &query).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("verdict", r.verdict.to_string())?;
    d.set_item("lambda", r.lambda)?;
    d.set_item("certificate", r.certificate)?;
    d.set_item("best_lower", r.best_lower)?;
    d.set_item("gap", r.gap)?;
    d.set_item("violations", r.violations)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (n, m, k = 1))]
fn welch_timephase(n: u64, m: u64, k: u32) -> PyResult<f64> {
    Ok(bounds::welch_timephase(n, m, k).map_err(value_error)?.value)
}

#[pyfunction]
fn levenstein_timephase(n: u64, m: u64) -> PyResult<f64> {
    Ok(bounds::levenstein_timephase(n, m).map_err(value_error)?.value)
}

/// G(psi_b, omega^i) over the default GF(p^m), with b given by its
/// coefficient vector.
#[pyfunction]
fn gauss_sum(p: u64, m: u32, b: Vec<u64>, i: u64) -> PyResult<Complex64> {
    let field = make_field(p, m).map_err(value_error)?;
    let b = field.element(&b).map_err(value_error)?;
    let psi = AdditiveCharacter::new(&field, b).map_err(value_error)?;
    let chi = MultiplicativeCharacter::new(&field, i);
    characters::gauss_sum(&psi, &chi).map_err(value_error)
}

#[pyfunction]
fn check_gauss_magnitude(p: u64, m: u32) -> PyResult<bool> {
    let field = make_field(p, m).map_err(value_error)?;
    Ok(characters::check_gauss_magnitude(&field))
}

#[pymodule]
fn tpsig(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySignalSet>()?;
    m.add_class::<PyProfile>()?;
    m.add_function(wrap_pyfunction!(construct_gauss, m)?)?;
    m.add_function(wrap_pyfunction!(construct_cyclotomic, m)?)?;
    m.add_function(wrap_pyfunction!(random_unit_set, m)?)?;
    m.add_function(wrap_pyfunction!(bound_table, m)?)?;
    m.add_function(wrap_pyfunction!(judge, m)?)?;
    m.add_function(wrap_pyfunction!(welch_timephase, m)?)?;
    m.add_function(wrap_pyfunction!(levenstein_timephase, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_sum, m)?)?;
    m.add_function(wrap_pyfunction!(check_gauss_magnitude, m)?)?;
    Ok(())
}
