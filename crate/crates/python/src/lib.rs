//! Python bindings: exact arithmetic, polynomials, module parameters and the
//! verification suites.

use gkverify_core::cli::{self, ConfigOverrides, SuiteConfig};
use gkverify_core::gkmodule::{self, Sign};
use gkverify_core::liealg::CasimirKind;
use gkverify_core::poly::harmonic_basis;
use gkverify_core::{symsq, Block, GaussianRational as GR, ModuleParams, MultiPoly, VariableSpace};
use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: gkverify_core::Error) -> PyErr {
    match e {
        gkverify_core::Error::DivisionByZero => PyZeroDivisionError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Serializes through JSON so results arrive as plain dicts and lists.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn ratio_parts(x: &Bound<'_, PyAny>) -> PyResult<(i64, i64)> {
    let num: i64 = x.getattr("numerator")?.extract()?;
    let den: i64 = x.getattr("denominator")?.extract()?;
    Ok((num, den))
}

fn block(name: &str) -> PyResult<Block> {
    match name {
        "x" => Ok(Block::X),
        "y" => Ok(Block::Y),
        _ => Err(PyValueError::new_err(format!("block must be 'x' or 'y', got {name:?}"))),
    }
}

/// `a + bi` with `a, b` rational. Accepts ints or `fractions.Fraction`.
#[pyclass(name = "GaussianRational", module = "gkverify", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyGR(GR);

#[pymethods]
impl PyGR {
    #[new]
    #[pyo3(signature = (re = None, im = None))]
    fn new(re: Option<&Bound<'_, PyAny>>, im: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let re = re.map(ratio_parts).transpose()?.unwrap_or((0, 1));
        let im = im.map(ratio_parts).transpose()?.unwrap_or((0, 1));
        if re.1 == 0 || im.1 == 0 {
            return Err(PyZeroDivisionError::new_err("zero denominator"));
        }
        Ok(Self(GR::complex(re, im)))
    }

    #[staticmethod]
    fn i() -> Self {
        Self(GR::i())
    }

    #[getter]
    fn re<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        py.import("fractions")?.getattr("Fraction")?.call1((self.0.re().to_string(),))
    }

    #[getter]
    fn im<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        py.import("fractions")?.getattr("Fraction")?.call1((self.0.im().to_string(),))
    }

    fn conj(&self) -> Self {
        Self(self.0.conj())
    }

    fn inv(&self) -> PyResult<Self> {
        self.0.inv().map(Self).map_err(err)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __add__(&self, o: &Self) -> Self {
        Self(&self.0 + &o.0)
    }

    fn __sub__(&self, o: &Self) -> Self {
        Self(&self.0 - &o.0)
    }

    fn __mul__(&self, o: &Self) -> Self {
        Self(&self.0 * &o.0)
    }

    fn __truediv__(&self, o: &Self) -> PyResult<Self> {
        self.0.checked_div(&o.0).map(Self).map_err(err)
    }

    fn __neg__(&self) -> Self {
        Self(-&self.0)
    }

    fn __pow__(&self, e: u32, _modulo: Option<u32>) -> Self {
        Self(self.0.pow(e))
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.0.to_string().hash(&mut h);
        h.finish()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("GaussianRational({})", self.0)
    }
}

/// Polynomial in `x₁..x_p, y₁..y_q` with Gaussian rational coefficients.
#[pyclass(name = "MultiPoly", module = "gkverify", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPoly(MultiPoly);

impl PyPoly {
    fn same_space(&self, o: &Self) -> PyResult<()> {
        if self.0.space() == o.0.space() {
            Ok(())
        } else {
            Err(PyValueError::new_err("polynomials live in different spaces"))
        }
    }
}

#[pymethods]
impl PyPoly {
    #[staticmethod]
    fn constant(p: usize, q: usize, c: &PyGR) -> Self {
        Self(MultiPoly::constant(VariableSpace::new(p, q), c.0.clone()))
    }

    /// The coordinate `x_i` (0-based).
    #[staticmethod]
    fn x(p: usize, q: usize, i: usize) -> PyResult<Self> {
        if i >= p {
            return Err(PyValueError::new_err(format!("x index {i} out of range")));
        }
        Ok(Self(MultiPoly::x(VariableSpace::new(p, q), i)))
    }

    /// The coordinate `y_j` (0-based).
    #[staticmethod]
    fn y(p: usize, q: usize, j: usize) -> PyResult<Self> {
        if j >= q {
            return Err(PyValueError::new_err(format!("y index {j} out of range")));
        }
        Ok(Self(MultiPoly::y(VariableSpace::new(p, q), j)))
    }

    /// `r²/2` of the given block.
    #[staticmethod]
    fn rho(p: usize, q: usize, which: &str) -> PyResult<Self> {
        Ok(Self(MultiPoly::rho(VariableSpace::new(p, q), block(which)?)))
    }

    /// Basis of harmonic polynomials of degree `k` in one block.
    #[staticmethod]
    fn harmonic_basis(p: usize, q: usize, which: &str, k: usize) -> PyResult<Vec<Self>> {
        let b = harmonic_basis(VariableSpace::new(p, q), block(which)?, k);
        Ok(b.elements.into_iter().map(Self).collect())
    }

    fn degree(&self) -> Option<u32> {
        self.0.degree()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn scale(&self, c: &PyGR) -> Self {
        Self(self.0.scale(&c.0))
    }

    fn partial(&self, v: usize) -> PyResult<Self> {
        if v >= self.0.space().nvars() {
            return Err(PyValueError::new_err(format!("variable {v} out of range")));
        }
        Ok(Self(self.0.partial(v)))
    }

    fn laplacian(&self, which: &str) -> PyResult<Self> {
        Ok(Self(self.0.laplacian(block(which)?)))
    }

    fn euler(&self, which: &str) -> PyResult<Self> {
        Ok(Self(self.0.euler(block(which)?)))
    }

    fn is_harmonic(&self, which: &str) -> PyResult<bool> {
        Ok(self.0.is_harmonic(block(which)?))
    }

    /// Harmonic projection `P − ρ/(2d+n−4)·ΔP`.
    fn dagger(&self, which: &str) -> PyResult<Self> {
        self.0.dagger(block(which)?).map(Self).map_err(err)
    }

    fn truncate(&self, max_degree: i64) -> Self {
        Self(self.0.truncate(max_degree))
    }

    fn __add__(&self, o: &Self) -> PyResult<Self> {
        self.same_space(o)?;
        Ok(Self(&self.0 + &o.0))
    }

    fn __sub__(&self, o: &Self) -> PyResult<Self> {
        self.same_space(o)?;
        Ok(Self(&self.0 - &o.0))
    }

    fn __mul__(&self, o: &Self) -> PyResult<Self> {
        self.same_space(o)?;
        Ok(Self(&self.0 * &o.0))
    }

    fn __neg__(&self) -> Self {
        Self(-&self.0)
    }

    fn __pow__(&self, e: u32, _modulo: Option<u32>) -> Self {
        Self(self.0.pow(e))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("MultiPoly({})", self.0)
    }
}

/// Parameters `(p, q, m, ±)` of the module.
#[pyclass(name = "ModuleParams", module = "gkverify", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyParams(ModuleParams);

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (p, q, m, sign = "+"))]
    fn new(p: usize, q: usize, m: usize, sign: &str) -> PyResult<Self> {
        let sign = match sign {
            "+" => Sign::Plus,
            "-" => Sign::Minus,
            _ => return Err(PyValueError::new_err("sign must be '+' or '-'")),
        };
        let params = ModuleParams::new(p, q, m, sign);
        params.validate().map_err(err)?;
        Ok(Self(params))
    }

    #[getter]
    fn p(&self) -> usize {
        self.0.p
    }

    #[getter]
    fn q(&self) -> usize {
        self.0.q
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m
    }

    #[getter]
    fn sign(&self) -> String {
        self.0.sign.to_string()
    }

    fn default_validity(&self) -> i64 {
        self.0.default_validity()
    }

    fn admits(&self, k: usize, l: usize) -> bool {
        self.0.admits(&self.0.ktype(k, l))
    }

    /// `(κ₊, κ₋)` of the K-type `H^k ⊗ H^l`, as strings.
    fn kappa(&self, k: usize, l: usize) -> (String, String) {
        let kt = self.0.ktype(k, l);
        (kt.kappa_plus().to_string(), kt.kappa_minus().to_string())
    }

    /// Predicted `Ξ̂` eigenvalue on the K-type `H^k ⊗ H^l`.
    fn lambda_(&self, k: usize, l: usize) -> PyGR {
        PyGR(self.0.lambda(&self.0.ktype(k, l)))
    }

    fn casimir_scalar(&self) -> PyGR {
        PyGR(self.0.casimir_g_scalar())
    }

    fn ktypes<'py>(&self, py: Python<'py>, k_max: usize, l_max: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &gkmodule::ktype_enumeration(&self.0, k_max, l_max))
    }

    fn __repr__(&self) -> String {
        format!("ModuleParams({})", self.0)
    }
}

/// Builds `h1·h2·ρ^μ·ψ_κ` from the first harmonic basis elements of degrees
/// `k, l` and runs membership and eigenvalue checks on it.
#[pyfunction]
#[pyo3(signature = (params, k, l, validity = None))]
fn check_typical_element<'py>(
    py: Python<'py>,
    params: &PyParams,
    k: usize,
    l: usize,
    validity: Option<i64>,
) -> PyResult<Bound<'py, PyAny>> {
    #[derive(Serialize)]
    struct Out {
        ktype: String,
        validity: i64,
        membership: gkmodule::MembershipReport,
        eigenvalues: Vec<gkmodule::EigenCheck>,
    }
    let p = params.0;
    let v = validity.unwrap_or_else(|| p.default_validity());
    let s = p.space();
    let first = |b, d| harmonic_basis(s, b, d).elements.into_iter().next().expect("nonempty basis");
    let kt = p.ktype(k, l);
    let out = py
        .detach(|| -> gkverify_core::Result<Out> {
            let f = gkmodule::typical_element(&p, &first(Block::X, k), &first(Block::Y, l), v)?;
            let membership = gkmodule::verify_membership(&p, &f)?;
            let mut eigenvalues = gkmodule::casimir_eigenvalue_check(&p, &kt, &f)?;
            eigenvalues.push(gkmodule::xi_eigenvalue_check(&p, &kt, &f)?);
            Ok(Out {
                ktype: kt.to_string(),
                validity: f.validity,
                membership,
                eigenvalues,
            })
        })
        .map_err(err)?;
    to_py(py, &out)
}

/// Casimir eigenvalue predicted on the K-type `H^k ⊗ H^l`; `which` is
/// `"g"`, `"op"` or `"oq"`.
#[pyfunction]
fn casimir_eigenvalue(params: &PyParams, which: &str, k: usize, l: usize) -> PyResult<PyGR> {
    let kind = match which {
        "g" => CasimirKind::G,
        "op" => CasimirKind::Op,
        "oq" => CasimirKind::Oq,
        _ => return Err(PyValueError::new_err("which must be 'g', 'op' or 'oq'")),
    };
    Ok(PyGR(gkmodule::casimir_eigenvalue(&params.0, kind, &params.0.ktype(k, l))))
}

/// Solves for `Y ∈ g`, `λ` with `π(Y)f = (λ_κ − λ)f` on the default samples.
#[pyfunction]
#[pyo3(signature = (params, validity = None))]
fn garfinkle<'py>(py: Python<'py>, params: &PyParams, validity: Option<i64>) -> PyResult<Bound<'py, PyAny>> {
    let p = params.0;
    let v = validity.unwrap_or_else(|| p.default_validity());
    let r = py.detach(|| gkmodule::garfinkle_default(&p, v)).map_err(err)?;
    to_py(py, &r)
}

/// Casimir scalar, `S₄` vanishing and the obstruction combined.
#[pyfunction]
#[pyo3(signature = (params, validity = None))]
fn theorem_ingredients<'py>(py: Python<'py>, params: &PyParams, validity: Option<i64>) -> PyResult<Bound<'py, PyAny>> {
    let p = params.0;
    let v = validity.unwrap_or_else(|| p.default_validity());
    let r = py.detach(|| symsq::theorem_ingredients(&p, v)).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
fn decomposition<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| symsq::decomposition_report(n)).map_err(err)?;
    to_py(py, &r)
}

/// Runs the check suites and returns the JSON report as a dict.
#[pyfunction]
#[pyo3(signature = (p = None, q = None, m = None, suites = "all", max_degree = None, k_max = None, l_max = None))]
#[allow(clippy::too_many_arguments)]
fn run<'py>(
    py: Python<'py>,
    p: Option<usize>,
    q: Option<usize>,
    m: Option<usize>,
    suites: &str,
    max_degree: Option<i64>,
    k_max: Option<usize>,
    l_max: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let overrides = ConfigOverrides {
        p,
        q,
        m,
        max_degree,
        k_max,
        l_max,
        suite: Some(suites.to_string()),
        ..Default::default()
    };
    let config = SuiteConfig::resolve(overrides).map_err(err)?;
    let report = py.detach(|| cli::run(&config)).map_err(err)?;
    to_py(py, &report)
}

#[pyfunction]
fn list_checks<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &cli::list_checks())
}

#[pymodule]
fn gkverify(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGR>()?;
    m.add_class::<PyPoly>()?;
    m.add_class::<PyParams>()?;
    m.add_function(wrap_pyfunction!(check_typical_element, m)?)?;
    m.add_function(wrap_pyfunction!(casimir_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(garfinkle, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_ingredients, m)?)?;
    m.add_function(wrap_pyfunction!(decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(list_checks, m)?)?;
    Ok(())
}
