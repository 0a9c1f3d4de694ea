use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use widomlab::asymptotics;
use widomlab::geometry::{Domain as CoreDomain, Point};
use widomlab::harness::{self, config::SymbolSpec, ExperimentConfig};
use widomlab::operators::{self, DiscreteOperator, Resolution, TorusGrid};
use widomlab::spectral;
use widomlab::symbols::{Symbol as CoreSymbol, TestFunction as CoreTestFunction};

fn err(e: widomlab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn point(v: &[f64]) -> PyResult<Point> {
    match v {
        [x] => Ok([*x, 0.0]),
        [x, y] => Ok([*x, *y]),
        _ => Err(PyValueError::new_err("points need 1 or 2 coordinates")),
    }
}

/// A spatial or frequency domain.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Domain(CoreDomain);

#[pymethods]
impl Domain {
    #[staticmethod]
    fn interval(lo: f64, hi: f64) -> PyResult<Self> {
        CoreDomain::interval(lo, hi).map(Domain).map_err(err)
    }

    #[staticmethod]
    fn rect(lo: Vec<f64>, hi: Vec<f64>) -> PyResult<Self> {
        CoreDomain::rect(point(&lo)?, point(&hi)?).map(Domain).map_err(err)
    }

    #[staticmethod]
    fn disk(center: Vec<f64>, radius: f64) -> PyResult<Self> {
        CoreDomain::disk(point(&center)?, radius).map(Domain).map_err(err)
    }

    #[staticmethod]
    fn polygon(vertices: Vec<(f64, f64)>) -> PyResult<Self> {
        CoreDomain::polygon(vertices.into_iter().map(|(x, y)| [x, y]).collect())
            .map(Domain)
            .map_err(err)
    }

    #[staticmethod]
    fn complement(inner: &Domain, bbox_lo: Vec<f64>, bbox_hi: Vec<f64>) -> PyResult<Self> {
        CoreDomain::complement(inner.0.clone(), point(&bbox_lo)?, point(&bbox_hi)?)
            .map(Domain)
            .map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn volume(&self) -> f64 {
        self.0.volume()
    }

    fn diam(&self) -> f64 {
        self.0.diam()
    }

    fn boundary_measure(&self) -> f64 {
        self.0.boundary_measure()
    }

    fn contains(&self, x: Vec<f64>) -> PyResult<bool> {
        Ok(self.0.contains(point(&x)?))
    }

    fn __repr__(&self) -> String {
        format!("Domain({:?})", self.0.shape())
    }
}

/// Symbol a(x, ξ), a finite sum of separable terms.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Symbol(CoreSymbol);

#[pymethods]
impl Symbol {
    #[staticmethod]
    fn constant(dim: usize, value: Complex64) -> Self {
        Symbol(CoreSymbol::constant(dim, value))
    }

    #[staticmethod]
    fn one(dim: usize) -> Self {
        Symbol(CoreSymbol::one(dim))
    }

    /// Builds a symbol from the TOML table used by experiment configs,
    /// e.g. `kind = "separable"` with `[spatial]` and `[frequency]` tables.
    #[staticmethod]
    fn from_toml(dim: usize, text: &str) -> PyResult<Self> {
        let spec: SymbolSpec = toml_from_str(text)?;
        spec.build(dim).map(Symbol).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn eval(&self, x: Vec<f64>, xi: Vec<f64>) -> PyResult<Complex64> {
        Ok(self.0.eval(point(&x)?, point(&xi)?))
    }

    fn is_constant(&self) -> bool {
        self.0.is_constant()
    }
}

fn toml_from_str<T: serde::de::DeserializeOwned>(text: &str) -> PyResult<T> {
    toml::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Test function g with g(0) = 0.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct TestFunction(CoreTestFunction);

#[pymethods]
impl TestFunction {
    #[staticmethod]
    fn power(p: usize) -> PyResult<Self> {
        if p == 0 {
            return Err(PyValueError::new_err("p must be at least 1"));
        }
        Ok(TestFunction(CoreTestFunction::power(p)))
    }

    /// Σ coeffs[k] t^(k+1)
    #[staticmethod]
    fn polynomial(coeffs: Vec<f64>) -> Self {
        TestFunction(CoreTestFunction::polynomial(coeffs))
    }

    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        CoreTestFunction::named(name).map(TestFunction).map_err(err)
    }

    fn __call__(&self, t: f64) -> f64 {
        self.0.eval_real(t)
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label()
    }
}

/// A discretized truncated operator.
#[pyclass(frozen)]
struct Operator(DiscreteOperator);

#[pymethods]
impl Operator {
    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha
    }

    #[getter]
    fn backend(&self) -> &'static str {
        self.0.backend.name()
    }

    #[getter]
    fn hermitian(&self) -> bool {
        self.0.hermitian
    }

    /// Dense matrix as a list of rows.
    fn matrix(&self) -> Vec<Vec<Complex64>> {
        let m = &self.0.matrix;
        (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
    }

    /// tr T^p for p = 1..=p_max.
    fn traces(&self, py: Python<'_>, p_max: usize) -> Vec<Complex64> {
        py.detach(|| spectral::trace_poly(&self.0, p_max))
    }

    fn eigenvalues(&self, py: Python<'_>) -> PyResult<Vec<f64>> {
        py.detach(|| spectral::eigenvalues(&self.0)).map_err(err)
    }

    fn trace_smooth(&self, py: Python<'_>, g: &TestFunction) -> PyResult<f64> {
        py.detach(|| spectral::trace_smooth(&self.0, &g.0)).map_err(err)
    }

    fn trace_norm(&self, py: Python<'_>) -> f64 {
        py.detach(|| spectral::trace_norm(&self.0))
    }

    fn symmetrize(&self) -> Operator {
        Operator(self.0.symmetrize())
    }

    fn write_whop(&self, path: &str) -> PyResult<()> {
        operators::write_whop(&self.0, path).map_err(err)
    }
}

/// Assembles χ_Λ P_Ω Op(a) P_Ω χ_Λ on the chosen backend.
#[pyfunction]
#[pyo3(signature = (symbol, lam, omega, alpha, backend = "dense", ppw = 6.0, pad_factor = 3.0))]
fn assemble(
    py: Python<'_>,
    symbol: &Symbol,
    lam: &Domain,
    omega: &Domain,
    alpha: f64,
    backend: &str,
    ppw: f64,
    pad_factor: f64,
) -> PyResult<Operator> {
    let res = Resolution {
        ppw,
        pad_factor,
        ..Resolution::default()
    };
    let (a, l, o) = (&symbol.0, &lam.0, &omega.0);
    py.detach(|| match backend {
        "dense" => operators::assemble_dense(a, l, o, alpha, &res),
        "torus" => TorusGrid::plan(l, o, alpha, Some(a), &res)
            .and_then(|g| operators::assemble_torus(a, l, o, alpha, &g)),
        other => Err(widomlab::Error::Config(format!("unknown backend `{other}`"))),
    })
    .map(Operator)
    .map_err(err)
}

/// A(g; s)
#[pyfunction]
fn coeff_a(g: &TestFunction, s: Complex64) -> PyResult<Complex64> {
    asymptotics::coeff_a(&g.0, s).map_err(err)
}

/// (W0, W1) of the two-term asymptotics; W0 is None for unbounded Λ.
#[pyfunction]
#[pyo3(signature = (g, symbol, lam, omega, symmetrized = false, level = 4))]
fn predict(
    g: &TestFunction,
    symbol: &Symbol,
    lam: &Domain,
    omega: &Domain,
    symmetrized: bool,
    level: usize,
) -> PyResult<(Option<Complex64>, Complex64)> {
    let p = asymptotics::predict(&g.0, &symbol.0, &lam.0, &omega.0, symmetrized, level).map_err(err)?;
    Ok((p.w0, p.w1))
}

/// Fits (c_log, c_plain) to value − w0 α^d; returns (c_log, c_plain, condition).
#[pyfunction]
#[pyo3(signature = (points, w0 = None, d = 1))]
fn fit_log_coefficient(points: Vec<(f64, f64)>, w0: Option<f64>, d: usize) -> PyResult<(f64, f64, f64)> {
    let f = asymptotics::fit_log_coefficient(&points, w0, d, None).map_err(err)?;
    Ok((f.c_log, f.c_plain, f.condition))
}

/// Runs a config file or preset; returns (pass, report JSON).
#[pyfunction]
fn run_config(py: Python<'_>, config: &str) -> PyResult<(bool, String)> {
    let cfg = ExperimentConfig::load(config).map_err(err)?;
    let report = py.detach(|| harness::run(&cfg)).map_err(err)?;
    let json = serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok((report.pass, json))
}

#[pyfunction]
fn presets() -> Vec<&'static str> {
    harness::PRESETS.iter().map(|(n, _)| *n).collect()
}

#[pymodule]
fn widomlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Domain>()?;
    m.add_class::<Symbol>()?;
    m.add_class::<TestFunction>()?;
    m.add_class::<Operator>()?;
    m.add_function(wrap_pyfunction!(assemble, m)?)?;
    m.add_function(wrap_pyfunction!(coeff_a, m)?)?;
    m.add_function(wrap_pyfunction!(predict, m)?)?;
    m.add_function(wrap_pyfunction!(fit_log_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    Ok(())
}
