//! Python bindings: codes, Pauli arithmetic, transversal verification, the
//! homomorphic scheme, and the closed-form bounds.
//!
//! Build the cdylib and rename it to `qclab.so` (or run
//! `python/smoke_test.py`, which does this for you).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qclab_core::bounds;
use qclab_core::clifford::{self, HierarchyLevel};
use qclab_core::codes::{self, CodeClass, CodeSpace};
use qclab_core::error::Error;
use qclab_core::pauli::PauliString;
use qclab_core::qhe::{self, QheParams};
use qclab_core::qla::gates;
use qclab_core::transversal::{self, ProductOperator};

fn to_py(err: Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

/// A code encoding one logical qubit.
#[pyclass(name = "Code")]
struct PyCode {
    inner: CodeSpace,
    name: String,
}

#[pymethods]
impl PyCode {
    /// Builtin code by name (see `builtin_codes()`).
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        Ok(Self {
            inner: codes::builtin_code(name).map_err(to_py)?,
            name: name.to_string(),
        })
    }

    /// Load from a code file (`stabilizer:` or `amplitudes:` sections).
    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        let loaded = codes::parse_code_file(&text).map_err(to_py)?;
        Ok(Self {
            inner: loaded.code,
            name: path.to_string(),
        })
    }

    #[getter]
    fn name(&self) -> &str {
        &self.name
    }

    #[getter]
    fn n_physical(&self) -> usize {
        self.inner.n_physical()
    }

    fn distance(&self) -> PyResult<usize> {
        self.inner.distance().map_err(to_py)
    }

    /// (passes, checked, violations) for the error scan up to max_weight.
    fn kl_check(&self, max_weight: usize) -> PyResult<(bool, usize, usize)> {
        let report = codes::kl_check(&self.inner, max_weight).map_err(to_py)?;
        Ok((report.passes(), report.checked, report.violations.len()))
    }

    /// "generic", "r_fold(r)", or "maximally_redundant".
    fn classify(&self) -> PyResult<String> {
        let c = codes::classify(&self.inner).map_err(to_py)?;
        Ok(match c.class {
            CodeClass::Generic => "generic".to_string(),
            CodeClass::RFold(r) => format!("r_fold({r})"),
            CodeClass::MaximallyRedundant => "maximally_redundant".to_string(),
        })
    }

    fn fold_count(&self) -> PyResult<usize> {
        Ok(codes::rfold_decompose(&self.inner).map_err(to_py)?.fold_count())
    }

    fn is_additive(&self) -> PyResult<bool> {
        Ok(codes::is_additive(&self.inner).map_err(to_py)?.additive)
    }

    /// Verify a uniform (strongly transversal) candidate against a target
    /// gate; returns (logical, strongly_transversal, residual).
    fn verify_transversal(&self, gate: &str, target: &str) -> PyResult<(bool, bool, f64)> {
        let factor = gates::named(gate).map_err(to_py)?;
        let target = gates::named(target).map_err(to_py)?;
        let op = ProductOperator::uniform(self.inner.n_physical(), factor).map_err(to_py)?;
        let report = transversal::verify_transversal(&self.inner, &op, &target).map_err(to_py)?;
        Ok((report.logical, report.strongly_transversal, report.max_residual.min(1.0)))
    }
}

/// Homomorphic scheme over a builtin code.
#[pyclass(name = "Scheme")]
struct PyScheme {
    params: QheParams,
}

#[pymethods]
impl PyScheme {
    #[new]
    #[pyo3(signature = (code, p = 1, m = 2))]
    fn new(code: &str, p: usize, m: usize) -> PyResult<Self> {
        let code = codes::builtin_code(code).map_err(to_py)?;
        Ok(Self {
            params: QheParams::new(code, p, m).map_err(to_py)?,
        })
    }

    #[getter]
    fn n_sent(&self) -> usize {
        self.params.n_sent()
    }

    #[getter]
    fn server_qubits(&self) -> usize {
        self.params.server_qubits()
    }

    #[getter]
    fn withheld(&self) -> Vec<usize> {
        self.params.withheld().to_vec()
    }

    /// Encrypt, apply the gate homomorphically, decrypt. Returns
    /// (decrypted_bits, probability). The gate is verified transversal for
    /// this code first.
    fn demo(&self, gate: &str, input: &str, seed: u64) -> PyResult<(String, f64)> {
        let bits = qhe::parse_bits(input, self.params.p()).map_err(to_py)?;
        let factor = gates::named(gate).map_err(to_py)?;
        let op = ProductOperator::uniform(self.params.code().n_physical(), factor.clone())
            .map_err(to_py)?;
        let check =
            transversal::verify_transversal(self.params.code(), &op, &factor).map_err(to_py)?;
        if !check.logical {
            return Err(PyValueError::new_err(format!(
                "gate `{gate}` is not a logical operator of this code"
            )));
        }
        let key = qhe::keygen(&self.params, seed);
        let ct = qhe::encrypt(&self.params, &key, &bits).map_err(to_py)?;
        let evaluated = qhe::evaluate(&self.params, &ct, &op).map_err(to_py)?;
        let out = qhe::decrypt(&self.params, &evaluated, &key).map_err(to_py)?;
        Ok((out.bits_string(), out.probability))
    }

    /// Factorized security bound: (bound_1norm, p_ell, empirical_c).
    fn security_bound(&self, input: &str) -> PyResult<(f64, Vec<f64>, Option<f64>)> {
        let bits = qhe::parse_bits(input, self.params.p()).map_err(to_py)?;
        let bound = qhe::security_bound(&self.params, &bits).map_err(to_py)?;
        Ok((bound.bound_1norm, bound.p_ell, bound.empirical_c))
    }

    /// Dense exact distances: (to_uniform_x, to_uniform_y, between).
    fn security_exact(&self, x: &str, y: &str) -> PyResult<(f64, f64, f64)> {
        let xb = qhe::parse_bits(x, self.params.p()).map_err(to_py)?;
        let yb = qhe::parse_bits(y, self.params.p()).map_err(to_py)?;
        let exact = qhe::security_exact(&self.params, &xb, &yb).map_err(to_py)?;
        Ok((
            exact.dist_to_uniform_x,
            exact.dist_to_uniform_y,
            exact.dist_between,
        ))
    }
}

/// Names accepted by `Code(...)`.
#[pyfunction]
fn builtin_codes() -> Vec<&'static str> {
    codes::BUILTIN_NAMES.to_vec()
}

#[pyfunction]
fn binary_entropy(p: f64) -> PyResult<f64> {
    qclab_core::qla::binary_entropy(p).map_err(to_py)
}

#[pyfunction]
fn nayak_lower_bound(n: usize, p: f64) -> PyResult<f64> {
    bounds::nayak_lower_bound(n, p).map_err(to_py)
}

#[pyfunction]
fn qfhe_comm_bound(n: usize, epsilon: f64) -> PyResult<f64> {
    bounds::qfhe_comm_bound(n, epsilon).map_err(to_py)
}

/// epsilon(K, m, n, c); returns (value, indeterminate).
#[pyfunction]
fn epsilon_formula(k: f64, m: f64, n: usize, c: f64) -> PyResult<(f64, bool)> {
    let eps = qhe::epsilon_formula(k, m, n, c).map_err(to_py)?;
    Ok((eps.value, eps.indeterminate))
}

/// Hierarchy level of a named gate, or None past the search cap.
#[pyfunction]
#[pyo3(signature = (gate, max_k = 4))]
fn clifford_level(gate: &str, max_k: usize) -> PyResult<Option<usize>> {
    let g = gates::named(gate).map_err(to_py)?;
    match clifford::clifford_level(&g, max_k).map_err(to_py)? {
        HierarchyLevel::Level(k) => Ok(Some(k)),
        HierarchyLevel::ExceedsMax(_) => Ok(None),
    }
}

#[pyfunction]
fn pauli_weight(text: &str) -> PyResult<usize> {
    Ok(PauliString::parse(text).map_err(to_py)?.weight())
}

#[pyfunction]
fn pauli_mul(a: &str, b: &str) -> PyResult<String> {
    let pa = PauliString::parse(a).map_err(to_py)?;
    let pb = PauliString::parse(b).map_err(to_py)?;
    Ok(pa.mul(&pb).map_err(to_py)?.to_string())
}

#[pyfunction]
fn pauli_commutes(a: &str, b: &str) -> PyResult<bool> {
    let pa = PauliString::parse(a).map_err(to_py)?;
    let pb = PauliString::parse(b).map_err(to_py)?;
    pa.commutes(&pb).map_err(to_py)
}

#[pymodule]
fn qclab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCode>()?;
    m.add_class::<PyScheme>()?;
    m.add_function(wrap_pyfunction!(builtin_codes, m)?)?;
    m.add_function(wrap_pyfunction!(binary_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(nayak_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(qfhe_comm_bound, m)?)?;
    m.add_function(wrap_pyfunction!(epsilon_formula, m)?)?;
    m.add_function(wrap_pyfunction!(clifford_level, m)?)?;
    m.add_function(wrap_pyfunction!(pauli_weight, m)?)?;
    m.add_function(wrap_pyfunction!(pauli_mul, m)?)?;
    m.add_function(wrap_pyfunction!(pauli_commutes, m)?)?;
    Ok(())
}
