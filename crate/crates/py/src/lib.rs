//! Python bindings: circuits, synthesis, angles, skipping and exact search.

use pyo3::exceptions::{PyNotImplementedError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use core::adaptive::{self, SkipSet};
use core::angles::{self, AngleVector, PhaseTargets};
use core::circuit::{self as circ, Topology, Variant};
use core::synth::{self, SynthOptions};
use core::{Error, SigVec};
use diagsynth_core as core;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Unsupported(_) | Error::DegreeTooLarge { .. } => PyNotImplementedError::new_err(e.to_string()),
        Error::BudgetExceeded { .. } | Error::NodeLimit { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn variant(s: &str) -> PyResult<Variant> {
    s.parse().map_err(to_py)
}

fn topology(s: &str) -> PyResult<Topology> {
    s.parse().map_err(to_py)
}

/// A CX+phase circuit.
#[pyclass(name = "Circuit", module = "diagsynth", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCircuit {
    inner: core::Circuit,
}

#[pymethods]
impl PyCircuit {
    /// Builds a CX-only circuit from `(control, target)` pairs.
    #[new]
    #[pyo3(signature = (n, topology, cx = Vec::new()))]
    fn new(n: usize, topology: &str, cx: Vec<(usize, usize)>) -> PyResult<Self> {
        let inner = core::Circuit::from_cx(n, self::topology(topology)?, &cx).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: core::Circuit::from_json(text).map_err(to_py)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn topology(&self) -> String {
        self.inner.topology().to_string()
    }

    #[getter]
    fn cx_count(&self) -> usize {
        self.inner.cx_count()
    }

    #[getter]
    fn phase_count(&self) -> usize {
        self.inner.phase_count()
    }

    fn cx_pairs(&self) -> Vec<(usize, usize)> {
        self.inner.cx_pairs()
    }

    /// Final wire signatures as bitmasks.
    fn final_signatures(&self) -> Vec<u32> {
        circ::final_signatures(&self.inner).vectors().iter().map(|v| v.bits()).collect()
    }

    /// True if the circuit satisfies `variant` ("spa", "wpa" or "npa").
    fn check(&self, variant: &str) -> PyResult<bool> {
        Ok(circ::check_variant(&self.inner, self::variant(variant)?).pass)
    }

    fn report(&self, variant: &str) -> PyResult<String> {
        Ok(circ::check_variant(&self.inner, self::variant(variant)?).summary())
    }

    /// Symbolic phase gates at first visits; requires SPA coverage.
    fn place_phases(&self) -> PyResult<Self> {
        Ok(Self { inner: circ::place_phases(&self.inner).map_err(to_py)? })
    }

    /// Places phases and binds the angles that realize `alphas`.
    fn bind(&self, alphas: Vec<f64>) -> PyResult<Self> {
        let targets = PhaseTargets::new(alphas).map_err(to_py)?;
        let skeleton =
            if self.inner.is_cx_only() { circ::place_phases(&self.inner).map_err(to_py)? } else { self.inner.clone() };
        let bound = angles::bind_angles(&skeleton, &angles::compute_theta(&targets)).map_err(to_py)?;
        Ok(Self { inner: bound })
    }

    fn merge_phases(&self) -> Self {
        Self { inner: circ::merge_phase_gates(&self.inner) }
    }

    /// Phase applied to every basis state, reduced to `[0, 2π)`.
    fn phase_profile(&self) -> PyResult<Vec<f64>> {
        circ::phase_profile_all(&self.inner).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.inner.gates().len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Circuit(n={}, topology={}, cx={}, phases={})",
            self.inner.n(),
            self.inner.topology(),
            self.inner.cx_count(),
            self.inner.phase_count()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (variant, topology, n, swap_opt = false, seed = 0, fallback_linear = false))]
fn synthesize(
    variant: &str,
    topology: &str,
    n: usize,
    swap_opt: bool,
    seed: u64,
    fallback_linear: bool,
) -> PyResult<PyCircuit> {
    let opts = SynthOptions { swap_opt, seed, fallback_linear };
    let s = synth::synthesize(self::variant(variant)?, &self::topology(topology)?, n, opts).map_err(to_py)?;
    Ok(PyCircuit { inner: s.circuit })
}

/// Linear-topology circuit whose final wire signatures are `target`.
#[pyfunction]
fn reach(target: Vec<u32>) -> PyResult<PyCircuit> {
    let n = target.len();
    let vs = target.into_iter().map(|b| SigVec::new(b, n)).collect::<Result<Vec<_>, _>>().map_err(to_py)?;
    Ok(PyCircuit { inner: synth::linear::reach(&vs).map_err(to_py)? })
}

/// Angles for signatures `1..2^n` realizing `alphas`.
#[pyfunction]
fn compute_theta(alphas: Vec<f64>) -> PyResult<Vec<f64>> {
    let t = PhaseTargets::new(alphas).map_err(to_py)?;
    Ok(angles::compute_theta(&t).values().to_vec())
}

#[pyfunction]
fn reconstruct_alpha(n: usize, theta: Vec<f64>) -> PyResult<Vec<f64>> {
    let th = AngleVector::new(n, theta).map_err(to_py)?;
    Ok(angles::reconstruct_alpha(&th).alpha().to_vec())
}

/// Skeleton visiting every nonzero signature not listed in `skip`.
#[pyfunction]
fn synth_skipping(skip: Vec<u32>, topology: &str, n: usize) -> PyResult<PyCircuit> {
    let sigs = skip.into_iter().map(|b| SigVec::new(b, n)).collect::<Result<Vec<_>, _>>().map_err(to_py)?;
    let set = SkipSet::new(n, sigs, adaptive::DEFAULT_EPSILON).map_err(to_py)?;
    let c = adaptive::synth_skipping(&set, &self::topology(topology)?, n).map_err(to_py)?;
    Ok(PyCircuit { inner: c })
}

#[pyfunction]
fn generate_symmetries(support: Vec<usize>, alphas: Vec<f64>, n: usize) -> PyResult<Vec<f64>> {
    let t = adaptive::generate_symmetries(&support, &alphas, n).map_err(to_py)?;
    Ok(t.alpha().to_vec())
}

/// `(length, witness)` of a minimal circuit; raises RuntimeError past `budget`
/// or after `max_nodes` expansions.
#[pyfunction]
#[pyo3(signature = (variant, topology, n, budget = 24, max_nodes = None))]
fn exact_min(
    variant: &str,
    topology: &str,
    n: usize,
    budget: usize,
    max_nodes: Option<u64>,
) -> PyResult<(usize, PyCircuit)> {
    let (v, t) = (self::variant(variant)?, self::topology(topology)?);
    let limit = max_nodes.unwrap_or(u64::MAX);
    let (len, c) = core::search::exact_min_limited(v, &t, n, budget, limit).map_err(to_py)?;
    Ok((len, PyCircuit { inner: c }))
}

#[pyfunction]
fn lower_bound(variant: &str, topology: &str, n: usize) -> PyResult<usize> {
    Ok(core::search::verify_lower_bound(self::variant(variant)?, &self::topology(topology)?, n))
}

#[pymodule]
fn diagsynth(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCircuit>()?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(reach, m)?)?;
    m.add_function(wrap_pyfunction!(compute_theta, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(synth_skipping, m)?)?;
    m.add_function(wrap_pyfunction!(generate_symmetries, m)?)?;
    m.add_function(wrap_pyfunction!(exact_min, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
