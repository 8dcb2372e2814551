//! Python bindings: `import radrestrict`.

use pyo3::exceptions::{PyArithmeticError, PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use radial_restriction::gls::{self, PsiWeight};
use radial_restriction::radial_fourier::{self, DecayClass};
use radial_restriction::restriction::{self, RestrictionParams};
use radial_restriction::special_fns::{self, BesselOrder, RadialKernel};
use radial_restriction::{Error, Tolerance};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::Parse(_) => PyValueError::new_err(e.to_string()),
        Error::Overflow(_) | Error::Divergence(_) => PyArithmeticError::new_err(e.to_string()),
        Error::NonConvergence(_) => PyRuntimeError::new_err(e.to_string()),
        Error::Io(_) => PyIOError::new_err(e.to_string()),
    }
}

fn tolerance(rel: f64) -> PyResult<Tolerance> {
    Tolerance::new(rel, 1e-15).map_err(to_py)
}

fn params(d: u32, p: f64, q: f64) -> PyResult<RestrictionParams> {
    RestrictionParams::new(d, p, q).map_err(to_py)
}

fn kernel(d: u32) -> PyResult<RadialKernel> {
    RadialKernel::new(d).map_err(to_py)
}

/// A radial profile `F(r)` with its decay class.
#[pyclass(name = "Profile", module = "radrestrict", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyProfile {
    inner: radial_fourier::RadialProfile,
}

#[pymethods]
impl PyProfile {
    /// Normalised Gaussian density of width `sigma` in dimension `d`.
    #[staticmethod]
    fn gaussian(sigma: f64, d: u32) -> PyResult<Self> {
        let inner = radial_fourier::RadialProfile::gaussian(sigma, d).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn indicator(radius: f64) -> PyResult<Self> {
        let inner = radial_fourier::RadialProfile::indicator(radius).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// The normalised extremal profile for `(d, p, q)`.
    #[staticmethod]
    #[pyo3(signature = (d, p, q=2.0, rel_tol=1e-10))]
    fn extremal(d: u32, p: f64, q: f64, rel_tol: f64) -> PyResult<Self> {
        let ext = restriction::extremal_profile(&params(d, p, q)?, tolerance(rel_tol)?).map_err(to_py)?;
        Ok(Self { inner: ext.into_profile() })
    }

    /// Wraps a Python callable. `decay` is `"gaussian"` (scale = sigma), `"compact"`
    /// (scale = radius) or `"algebraic"` (scale = exponent of `r^-scale`).
    #[staticmethod]
    #[pyo3(signature = (func, decay, scale, label="python"))]
    fn from_callable(func: Py<PyAny>, decay: &str, scale: f64, label: &str) -> PyResult<Self> {
        let decay = match decay {
            "gaussian" => DecayClass::Gaussian { sigma: scale },
            "compact" => DecayClass::CompactSupport { radius: scale },
            "algebraic" => DecayClass::Algebraic { coefficient: 1.0, exponent: scale },
            other => return Err(PyValueError::new_err(format!("unknown decay class '{other}'"))),
        };
        let f = move |r: f64| {
            Python::attach(|py| {
                func.call1(py, (r,))
                    .and_then(|v| v.extract::<f64>(py))
                    .unwrap_or(f64::NAN)
            })
        };
        let inner = radial_fourier::RadialProfile::new(label, decay, f).map_err(to_py)?;
        Ok(Self { inner })
    }

    fn scaled(&self, c: f64) -> Self {
        Self { inner: self.inner.scaled(c) }
    }

    /// `a * self + b * other`.
    fn combine(&self, a: f64, other: &PyProfile, b: f64) -> Self {
        Self {
            inner: radial_fourier::RadialProfile::linear_combination(a, &self.inner, b, &other.inner),
        }
    }

    fn __call__(&self, r: f64) -> f64 {
        self.inner.eval(r)
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    fn __repr__(&self) -> String {
        format!("Profile({})", self.inner.label())
    }
}

/// Sharp radial constant with both assemblies.
#[pyclass(name = "SharpConstant", module = "radrestrict", frozen, get_all)]
struct PySharpConstant {
    d: u32,
    p: f64,
    q: f64,
    kernel_integral: f64,
    kernel_integral_error: f64,
    k_rad: f64,
    k_rad_paper: f64,
}

#[pymethods]
impl PySharpConstant {
    fn __repr__(&self) -> String {
        format!(
            "SharpConstant(d={}, p={}, q={}, k_rad={}, k_rad_paper={})",
            self.d, self.p, self.q, self.k_rad, self.k_rad_paper
        )
    }
}

#[pyfunction]
fn gamma(x: f64) -> PyResult<f64> {
    special_fns::gamma(x).map_err(to_py)
}

#[pyfunction]
fn sphere_area(d: u32) -> PyResult<f64> {
    special_fns::sphere_area(d).map_err(to_py)
}

#[pyfunction]
fn bessel_j(nu: f64, x: f64) -> PyResult<f64> {
    Ok(special_fns::bessel_j(BesselOrder::new(nu).map_err(to_py)?, x))
}

/// `k`-th positive zero of `J_nu`, `k >= 1`.
#[pyfunction]
fn bessel_j_zero(nu: f64, k: usize) -> PyResult<f64> {
    special_fns::bessel_j_zero(BesselOrder::new(nu).map_err(to_py)?, k).map_err(to_py)
}

#[pyfunction]
fn tomas_stein_admissible(d: u32, p: f64, q: f64) -> PyResult<bool> {
    Ok(restriction::tomas_stein_admissible(&params(d, p, q)?))
}

#[pyfunction]
fn radial_convergence_admissible(d: u32, p: f64) -> bool {
    restriction::radial_convergence_admissible(d, p)
}

#[pyfunction]
fn gaussian_lower_bound(d: u32, p: f64, q: f64, sigma: f64) -> PyResult<f64> {
    restriction::gaussian_lower_bound(&params(d, p, q)?, sigma).map_err(to_py)
}

/// Returns a dict with `bound`, `sigma_star`, `analytic_bound` and `paper_closed_form`.
#[pyfunction]
fn gaussian_lower_bound_optimized<'py>(py: Python<'py>, d: u32, p: f64, q: f64) -> PyResult<Bound<'py, PyDict>> {
    let g = restriction::gaussian_lower_bound_optimized(&params(d, p, q)?);
    let out = PyDict::new(py);
    out.set_item("bound", g.bound)?;
    out.set_item("sigma_star", g.sigma_star)?;
    out.set_item("analytic_bound", g.analytic_bound)?;
    out.set_item("paper_closed_form", g.paper_closed_form)?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (d, p, q, rel_tol=1e-10))]
fn sharp_radial_constant(py: Python<'_>, d: u32, p: f64, q: f64, rel_tol: f64) -> PyResult<PySharpConstant> {
    let pr = params(d, p, q)?;
    let tol = tolerance(rel_tol)?;
    let r = py.detach(|| restriction::sharp_radial_constant(&pr, tol)).map_err(to_py)?;
    Ok(PySharpConstant {
        d,
        p,
        q,
        kernel_integral: r.kernel_integral.value,
        kernel_integral_error: r.kernel_integral.error_estimate,
        k_rad: r.k_rad_first_principles,
        k_rad_paper: r.k_rad_paper_closed_form,
    })
}

/// `Z(f) = ||f^||_{L_q(S^{d-1})} / ||f||_p`.
#[pyfunction]
#[pyo3(signature = (profile, d, p, q, rel_tol=1e-10))]
fn ratio_z(profile: &PyProfile, d: u32, p: f64, q: f64, rel_tol: f64) -> PyResult<f64> {
    let z = restriction::ratio_z(&params(d, p, q)?, &profile.inner, tolerance(rel_tol)?).map_err(to_py)?;
    Ok(z.value)
}

/// `G(s) = int_0^inf V_d(s, r) F(r) dr`.
#[pyfunction]
#[pyo3(signature = (profile, d, s, rel_tol=1e-10))]
fn radial_hat(profile: &PyProfile, d: u32, s: f64, rel_tol: f64) -> PyResult<f64> {
    let g = radial_fourier::radial_hat(&kernel(d)?, &profile.inner, s, tolerance(rel_tol)?).map_err(to_py)?;
    Ok(g.value)
}

#[pyfunction]
#[pyo3(signature = (profile, d, p, rel_tol=1e-10))]
fn radial_lp_norm(profile: &PyProfile, d: u32, p: f64, rel_tol: f64) -> PyResult<f64> {
    let n = radial_fourier::radial_lp_norm(&kernel(d)?, &profile.inner, p, tolerance(rel_tol)?).map_err(to_py)?;
    Ok(n.value)
}

/// One dict per `(d, p, q)` triple; failed rows carry a `failure` message.
#[pyfunction]
#[pyo3(signature = (grid, rel_tol=1e-10))]
fn consistency_report<'py>(
    py: Python<'py>,
    grid: Vec<(u32, f64, f64)>,
    rel_tol: f64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let grid = grid.into_iter().map(|(d, p, q)| params(d, p, q)).collect::<PyResult<Vec<_>>>()?;
    let tol = tolerance(rel_tol)?;
    let rows = py.detach(|| restriction::consistency_report(&grid, tol));
    rows.into_iter()
        .map(|r| {
            let out = PyDict::new(py);
            out.set_item("d", r.d)?;
            out.set_item("p", r.p)?;
            out.set_item("q", r.q)?;
            out.set_item("k_rad", r.k_rad_first_principles)?;
            out.set_item("k_rad_paper", r.k_rad_paper_closed_form)?;
            out.set_item("k_rad_ratio", r.k_rad_ratio)?;
            out.set_item("gauss_opt", r.gaussian_numeric_optimum)?;
            out.set_item("gauss_paper", r.gaussian_paper_closed_form)?;
            out.set_item("gauss_ratio", r.gaussian_ratio)?;
            out.set_item("predicted_discrepancy", r.predicted_discrepancy)?;
            out.set_item("tomas_stein_ok", r.tomas_stein_ok)?;
            out.set_item("failure", r.failure)?;
            Ok(out)
        })
        .collect()
}

/// `sup_p ||f||_p / psi(p)` over the sampled `p` in `(a, b)`; `psi` is given by samples.
#[pyfunction]
fn gls_norm(norm_samples: Vec<(f64, f64)>, psi_samples: Vec<(f64, f64)>, a: f64, b: f64) -> PyResult<f64> {
    let psi = PsiWeight::new(a, b, psi_samples).map_err(to_py)?;
    gls::gls_norm(&norm_samples, &psi).map_err(to_py)
}

/// The `p` grid points inside the cut set for dimension `d`.
#[pyfunction]
fn cut_set(d: u32, p_grid: Vec<f64>) -> Vec<f64> {
    gls::cut_set(d, &p_grid)
}

#[pymodule]
fn radrestrict(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProfile>()?;
    m.add_class::<PySharpConstant>()?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_area, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_j, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_j_zero, m)?)?;
    m.add_function(wrap_pyfunction!(tomas_stein_admissible, m)?)?;
    m.add_function(wrap_pyfunction!(radial_convergence_admissible, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_lower_bound_optimized, m)?)?;
    m.add_function(wrap_pyfunction!(sharp_radial_constant, m)?)?;
    m.add_function(wrap_pyfunction!(ratio_z, m)?)?;
    m.add_function(wrap_pyfunction!(radial_hat, m)?)?;
    m.add_function(wrap_pyfunction!(radial_lp_norm, m)?)?;
    m.add_function(wrap_pyfunction!(consistency_report, m)?)?;
    m.add_function(wrap_pyfunction!(gls_norm, m)?)?;
    m.add_function(wrap_pyfunction!(cut_set, m)?)?;
    Ok(())
}
