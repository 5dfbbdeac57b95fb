//! Python bindings. Generator indices are 0-based, as in the Rust API;
//! structured results are returned as plain dictionaries.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;
use superkp::elliptic::{self, SuperEllipticData};
use superkp::jacobian::{self, PeriodData};
use superkp::linalg::CMatrix;
use superkp::sgr::{self, FrameSpec, HeisenbergElement, TruncationWindow};
use superkp::supermatrix::{self, SuperLinearSystem, SuperMatrix};
use superkp::theta::{self, Characteristic, ThetaContext};
use superkp::{acceptance, GrassmannScalar};

fn err(e: superkp::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Element of a finite Grassmann algebra.
#[pyclass(name = "GrassmannScalar", module = "pysuperkp", from_py_object)]
#[derive(Clone)]
struct PyScalar(GrassmannScalar);

#[derive(FromPyObject)]
enum Operand<'py> {
    Scalar(PyRef<'py, PyScalar>),
    Number(Complex64),
}

impl PyScalar {
    fn operand(&self, other: Operand<'_>) -> GrassmannScalar {
        match other {
            Operand::Scalar(s) => s.0.embed(self.0.n_generators().max(s.0.n_generators())),
            Operand::Number(c) => GrassmannScalar::scalar(self.0.n_generators(), c),
        }
    }

    fn lifted(&self, other: &GrassmannScalar) -> GrassmannScalar {
        self.0.embed(self.0.n_generators().max(other.n_generators()))
    }
}

#[pymethods]
impl PyScalar {
    /// `terms` maps tuples of 0-based generator indices to coefficients.
    #[new]
    #[pyo3(signature = (n, terms = None))]
    fn new(n: usize, terms: Option<Vec<(Vec<usize>, Complex64)>>) -> PyResult<Self> {
        if n > superkp::grassmann::MAX_GENERATORS {
            return Err(PyValueError::new_err(format!("at most {} generators", superkp::grassmann::MAX_GENERATORS)));
        }
        let mut x = GrassmannScalar::zero(n);
        for (indices, c) in terms.unwrap_or_default() {
            let mut term = GrassmannScalar::scalar(n, c);
            for i in indices {
                if i >= n {
                    return Err(PyValueError::new_err(format!("generator index {i} out of range for n = {n}")));
                }
                term = &term * &GrassmannScalar::generator(n, i);
            }
            x += &term;
        }
        Ok(PyScalar(x))
    }

    #[staticmethod]
    fn zero(n: usize) -> Self {
        PyScalar(GrassmannScalar::zero(n))
    }

    #[staticmethod]
    fn one(n: usize) -> Self {
        PyScalar(GrassmannScalar::one(n))
    }

    #[staticmethod]
    fn scalar(n: usize, c: Complex64) -> Self {
        PyScalar(GrassmannScalar::scalar(n, c))
    }

    #[staticmethod]
    fn generator(n: usize, i: usize) -> PyResult<Self> {
        if i >= n {
            return Err(PyValueError::new_err(format!("generator index {i} out of range for n = {n}")));
        }
        Ok(PyScalar(GrassmannScalar::generator(n, i)))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(PyScalar).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("scalars serialize")
    }

    #[getter]
    fn n_generators(&self) -> usize {
        self.0.n_generators()
    }

    #[getter]
    fn body(&self) -> Complex64 {
        self.0.body()
    }

    /// Coefficient of the monomial on the given generators, taken in increasing order.
    fn coeff(&self, indices: Vec<usize>) -> Complex64 {
        let mask = indices.iter().fold(0u32, |m, &i| m | (1 << i));
        self.0.coeff(mask)
    }

    /// `{tuple of generator indices: coefficient}`.
    fn terms(&self) -> Vec<(Vec<usize>, Complex64)> {
        self.0
            .terms()
            .iter()
            .map(|&(mask, c)| ((0..self.0.n_generators()).filter(|i| mask >> i & 1 == 1).collect(), c))
            .collect()
    }

    fn is_even(&self) -> bool {
        self.0.is_even()
    }

    fn is_odd(&self) -> bool {
        self.0.is_odd()
    }

    fn invert(&self) -> PyResult<Self> {
        self.0.invert().map(PyScalar).map_err(err)
    }

    fn exp(&self) -> Self {
        PyScalar(self.0.exp())
    }

    fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    #[pyo3(signature = (other, tol = 1e-12))]
    fn approx_eq(&self, other: PyRef<'_, PyScalar>, tol: f64) -> bool {
        let o = other.0.embed(self.0.n_generators().max(other.0.n_generators()));
        self.lifted(&o).approx_eq(&o, tol)
    }

    fn __add__(&self, other: Operand<'_>) -> Self {
        let o = self.operand(other);
        PyScalar(&self.lifted(&o) + &o)
    }

    fn __radd__(&self, other: Operand<'_>) -> Self {
        self.__add__(other)
    }

    fn __sub__(&self, other: Operand<'_>) -> Self {
        let o = self.operand(other);
        PyScalar(&self.lifted(&o) - &o)
    }

    fn __rsub__(&self, other: Operand<'_>) -> Self {
        let o = self.operand(other);
        PyScalar(&o - &self.lifted(&o))
    }

    fn __mul__(&self, other: Operand<'_>) -> Self {
        let o = self.operand(other);
        PyScalar(&self.lifted(&o) * &o)
    }

    fn __rmul__(&self, other: Operand<'_>) -> Self {
        let o = self.operand(other);
        PyScalar(&o * &self.lifted(&o))
    }

    fn __neg__(&self) -> Self {
        PyScalar(-&self.0)
    }

    fn __eq__(&self, other: PyRef<'_, PyScalar>) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("GrassmannScalar({})", self.0)
    }
}

/// Square or rectangular supermatrix with row shape `(p, q)` and column
/// shape `(r, s)`; even rows and columns come first.
#[pyclass(name = "SuperMatrix", module = "pysuperkp")]
struct PySuperMatrix(SuperMatrix);

#[pymethods]
impl PySuperMatrix {
    #[new]
    fn new(row_shape: (usize, usize), col_shape: (usize, usize), rows: Vec<Vec<PyScalar>>) -> PyResult<Self> {
        let n = rows.iter().flatten().map(|x| x.0.n_generators()).max().unwrap_or(0);
        let rows = rows.into_iter().map(|r| r.into_iter().map(|x| x.0.embed(n)).collect()).collect();
        SuperMatrix::from_rows(row_shape, col_shape, n, rows).map(PySuperMatrix).map_err(err)
    }

    #[staticmethod]
    fn identity(shape: (usize, usize), n: usize) -> Self {
        PySuperMatrix(SuperMatrix::identity(shape, n))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(PySuperMatrix).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("supermatrices serialize")
    }

    #[getter]
    fn row_shape(&self) -> (usize, usize) {
        self.0.row_shape()
    }

    #[getter]
    fn col_shape(&self) -> (usize, usize) {
        self.0.col_shape()
    }

    fn get(&self, i: usize, j: usize) -> PyResult<PyScalar> {
        if i >= self.0.nrows() || j >= self.0.ncols() {
            return Err(PyValueError::new_err(format!("index ({i}, {j}) out of range")));
        }
        Ok(PyScalar(self.0.get(i, j).clone()))
    }

    fn ber(&self) -> PyResult<PyScalar> {
        supermatrix::berezinian(&self.0).map(PyScalar).map_err(err)
    }

    fn ber_star(&self) -> PyResult<PyScalar> {
        supermatrix::berezinian_star(&self.0).map(PyScalar).map_err(err)
    }

    /// `|A|_ij` with 0-based indices.
    fn quasideterminant(&self, i: usize, j: usize) -> PyResult<PyScalar> {
        supermatrix::quasideterminant(&self.0, i, j).map(PyScalar).map_err(err)
    }

    fn inverse(&self) -> PyResult<Self> {
        supermatrix::invert_matrix(&self.0).map(PySuperMatrix).map_err(err)
    }

    /// Solves `x A = y` by the super Cramer rule.
    fn solve(&self, rhs: Vec<PyScalar>) -> PyResult<Vec<PyScalar>> {
        let n = self.0.n_generators();
        let sys = SuperLinearSystem::new(self.0.clone(), rhs.into_iter().map(|x| x.0.embed(n)).collect()).map_err(err)?;
        supermatrix::solve_cramer(&sys).map(|v| v.into_iter().map(PyScalar).collect()).map_err(err)
    }

    fn __matmul__(&self, other: PyRef<'_, PySuperMatrix>) -> PyResult<Self> {
        self.0.checked_mul(&other.0).map(PySuperMatrix).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("SuperMatrix(rows={:?}, cols={:?}, n={})", self.0.row_shape(), self.0.col_shape(), self.0.n_generators())
    }
}

/// Even and odd period blocks of a super curve.
#[pyclass(name = "PeriodData", module = "pysuperkp")]
struct PyPeriodData(PeriodData);

#[pymethods]
impl PyPeriodData {
    #[new]
    fn new(z_e: Vec<Vec<PyScalar>>, z_o: Vec<Vec<PyScalar>>) -> PyResult<Self> {
        let g = z_e.len();
        let n = z_e.iter().chain(&z_o).flatten().map(|x| x.0.n_generators()).max().unwrap_or(0);
        let lift = |rows: Vec<Vec<PyScalar>>| rows.into_iter().map(|r| r.into_iter().map(|x| x.0.embed(n)).collect()).collect();
        let z_e = superkp::matrix::LambdaMatrix::from_rows(n, lift(z_e)).map_err(err)?;
        let z_o = if g == 1 && z_o.iter().all(Vec::is_empty) {
            superkp::matrix::LambdaMatrix::zeros(n, 1, 0)
        } else {
            superkp::matrix::LambdaMatrix::from_rows(n, lift(z_o)).map_err(err)?
        };
        PeriodData::new(z_e, z_o).map(PyPeriodData).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(PyPeriodData).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("period data serializes")
    }

    #[getter]
    fn genus(&self) -> usize {
        self.0.genus()
    }

    fn connecting_map(&self) -> PySuperMatrix {
        PySuperMatrix(jacobian::connecting_map(&self.0))
    }

    fn projectedness<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &jacobian::projectedness_flags(&self.0))
    }

    fn dual_cohomology<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &jacobian::dual_cohomology(&self.0))
    }

    /// Largest bilinear and pair-relation residuals over the constructed
    /// differentials.
    fn relation_residuals(&self) -> PyResult<(f64, f64)> {
        let pd = &self.0;
        let pairs = jacobian::pair_relation_solutions(pd);
        let omegas: Vec<_> = pairs.iter().map(|(a, big_a)| jacobian::periods_from_coefficients(pd, a, big_a)).collect();
        let duals: Vec<_> = jacobian::dual_period_basis(pd).iter().map(jacobian::DualPeriodVector::to_period_vector).collect();
        let bilinear = jacobian::bilinear_check(&omegas, &duals).map_err(err)?;
        let mut pair: f64 = 0.0;
        for (a, big_a) in &pairs {
            for r in jacobian::pair_relation_check(pd, a, big_a).map_err(err)? {
                pair = pair.max(r.max_abs());
            }
        }
        Ok((bilinear, pair))
    }
}

/// Theta function `Θ(z; Z)` or a derivative, with complex period matrix and
/// argument. `characteristic` is `"0"` or `"11"`.
#[pyfunction]
#[pyo3(signature = (period_matrix, z, characteristic = "0", derivative = None))]
fn theta_value(period_matrix: Vec<Vec<Complex64>>, z: Vec<Complex64>, characteristic: &str, derivative: Option<Vec<u32>>) -> PyResult<Complex64> {
    let g = period_matrix.len();
    if period_matrix.iter().any(|r| r.len() != g) {
        return Err(PyValueError::new_err("period matrix must be square"));
    }
    let ch = match characteristic {
        "0" => Characteristic::Zero,
        "11" => Characteristic::OneOne,
        other => return Err(PyValueError::new_err(format!("unknown characteristic {other:?}"))),
    };
    let ctx = ThetaContext::classical(CMatrix::from_fn(g, g, |i, j| period_matrix[i][j]), 0, ch).map_err(err)?;
    let z: Vec<GrassmannScalar> = z.into_iter().map(|c| GrassmannScalar::scalar(0, c)).collect();
    let order = derivative.unwrap_or_else(|| vec![0; g]);
    theta::theta_derivative(&ctx, &z, &order).map(|v| v.body()).map_err(err)
}

/// `(deg L + 1 − g, deg L + deg N + 1 − g)`.
#[pyfunction]
fn riemann_roch(deg_l: i64, g: i64, deg_n: i64) -> (i64, i64) {
    jacobian::riemann_roch(deg_l, g, deg_n)
}

/// tau, tau* and truncation diagnostics for a frame given as JSON
/// (`{"kind": "standard" | "generic" | "delta" | "explicit", ...}`) and flows
/// given as JSON (`{"n": .., "times": [{"index": "1/2", "value": ..}]}`).
#[pyfunction]
#[pyo3(signature = (window_m, frame, flows = None))]
fn sgr_tau<'py>(py: Python<'py>, window_m: usize, frame: &str, flows: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
    let parse = |e: serde_json::Error| PyValueError::new_err(e.to_string());
    let spec: FrameSpec = serde_json::from_str(frame).map_err(parse)?;
    let frame = spec.build(TruncationWindow::new(window_m).map_err(err)?).map_err(err)?;
    let t: HeisenbergElement = match flows {
        Some(text) => serde_json::from_str(text).map_err(parse)?,
        None => HeisenbergElement::zero(frame.n_generators()),
    };
    let (value, diagnostics) = sgr::tau(&frame, &t).map_err(err)?;
    let (star, _) = sgr::tau_star(&frame, &t).map_err(err)?;
    to_py(py, &serde_json::json!({ "tau": value, "tau_star": star, "diagnostics": diagnostics }))
}

/// Genus-one report with `α = s β₁` and `δ = β₂`.
#[pyfunction]
#[pyo3(signature = (a, zeta, tau = Complex64::new(0.0, 2.0), alpha_delta_scale = Complex64::new(1.0, 0.0)))]
fn tau_elliptic<'py>(py: Python<'py>, a: Complex64, zeta: Complex64, tau: Complex64, alpha_delta_scale: Complex64) -> PyResult<Bound<'py, PyAny>> {
    let d = SuperEllipticData::standard(tau, a, zeta, alpha_delta_scale).map_err(err)?;
    to_py(py, &elliptic::check(&d).map_err(err)?)
}

/// Runs the acceptance criteria and returns one dictionary per criterion.
#[pyfunction]
#[pyo3(signature = (seed = 7))]
fn run_acceptance<'py>(py: Python<'py>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let results = py.detach(|| acceptance::run_all(seed));
    to_py(py, &results)
}

#[pymodule]
fn pysuperkp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScalar>()?;
    m.add_class::<PySuperMatrix>()?;
    m.add_class::<PyPeriodData>()?;
    m.add_function(wrap_pyfunction!(theta_value, m)?)?;
    m.add_function(wrap_pyfunction!(riemann_roch, m)?)?;
    m.add_function(wrap_pyfunction!(sgr_tau, m)?)?;
    m.add_function(wrap_pyfunction!(tau_elliptic, m)?)?;
    m.add_function(wrap_pyfunction!(run_acceptance, m)?)?;
    Ok(())
}
