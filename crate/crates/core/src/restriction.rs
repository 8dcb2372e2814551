//! The restriction inequality `||f^||_{L_q(S^{d-1})} <= K ||f||_{L_p(R^d)}` for radial `f`:
//! necessary exponent conditions, the Gaussian lower bound, the sharp radial constant
//! with its extremal profile, and a report comparing first-principles values with the
//! literal closed forms.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_oscillatory_bessel, OscillatoryIntegrand, QuadResult, Tolerance};
use crate::radial_fourier::{
    radial_lp_norm, sphere_norm_of_radial_hat, DecayClass, NormValue, RadialProfile,
    TransformValue,
};
use crate::special_fns::{bessel_j, gamma, BesselOrder, RadialKernel};

/// Exponents `(d, p, q)` with the derived `p' = p / (p - 1)` and the kernel exponent
/// `beta = (2 + d (p - 2)) / (2 (p - 1))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RestrictionParams {
    d: u32,
    p: f64,
    q: f64,
    p_prime: f64,
    beta: Option<f64>,
}

impl RestrictionParams {
    pub fn new(d: u32, p: f64, q: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("dimension must be >= 2, got {d}")));
        }
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::Domain(format!("p must satisfy 1 <= p < inf, got {p}")));
        }
        if !(q >= 1.0 && q.is_finite()) {
            return Err(Error::Domain(format!("q must satisfy 1 <= q < inf, got {q}")));
        }
        let (p_prime, beta) = if p == 1.0 {
            (f64::INFINITY, None)
        } else {
            let df = d as f64;
            (p / (p - 1.0), Some((2.0 + df * (p - 2.0)) / (2.0 * (p - 1.0))))
        };
        Ok(Self {
            d,
            p,
            q,
            p_prime,
            beta,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `inf` at `p = 1`.
    pub fn p_prime(&self) -> f64 {
        self.p_prime
    }

    /// `None` at `p = 1`.
    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub fn with_q(&self, q: f64) -> Result<Self> {
        Self::new(self.d, self.p, q)
    }

    /// `a = d (1 - 1/p)`, the dilation exponent of the Gaussian ratio.
    pub fn gaussian_exponent(&self) -> f64 {
        self.d as f64 * (1.0 - 1.0 / self.p)
    }

    fn kernel(&self) -> RadialKernel {
        RadialKernel::new(self.d).expect("dimension validated")
    }
}

fn reduced_fraction(num: u32, den: u32) -> String {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let g = gcd(num, den);
    if den / g == 1 {
        format!("{}", num / g)
    } else {
        format!("{}/{}", num / g, den / g)
    }
}

/// `(2d + 2) / (d + 3)`.
pub fn tomas_stein_p_max(d: u32) -> f64 {
    (2.0 * d as f64 + 2.0) / (d as f64 + 3.0)
}

/// `2d / (d + 1)`.
pub fn radial_convergence_p_max(d: u32) -> f64 {
    2.0 * d as f64 / (d as f64 + 1.0)
}

/// The necessary conditions `1 <= p <= (2d+2)/(d+3)` and `q <= ((d-1)/(d+1)) p'`.
pub fn tomas_stein_admissible(params: &RestrictionParams) -> bool {
    tomas_stein_violation(params).is_none()
}

/// Description of the violated necessary condition, if any.
pub fn tomas_stein_violation(params: &RestrictionParams) -> Option<String> {
    let d = params.d;
    if !(params.p <= tomas_stein_p_max(d)) {
        return Some(format!(
            "Tomas-Stein condition p <= (2d+2)/(d+3) = {} fails for p = {}",
            reduced_fraction(2 * d + 2, d + 3),
            params.p
        ));
    }
    if params.p > 1.0 {
        let df = d as f64;
        let q_max = (df - 1.0) / (df + 1.0) * params.p_prime;
        if !(params.q <= q_max) {
            return Some(format!(
                "Tomas-Stein condition q <= ((d-1)/(d+1)) p' = {q_max} fails for q = {}",
                params.q
            ));
        }
    }
    None
}

/// The convergence window `1 < p < 2d/(d+1)` of the sharp radial constant.
pub fn radial_convergence_admissible(d: u32, p: f64) -> bool {
    p > 1.0 && p < radial_convergence_p_max(d)
}

fn convergence_diagnostic(d: u32, p: f64) -> String {
    format!(
        "the sharp radial constant requires the convergence window 1 < p < 2d/(d+1) = {} \
         (d = {d}), got p = {p}",
        reduced_fraction(2 * d, d + 1)
    )
}

fn check_convergence(params: &RestrictionParams) -> Result<()> {
    if radial_convergence_admissible(params.d, params.p) {
        Ok(())
    } else {
        Err(Error::Divergence(convergence_diagnostic(params.d, params.p)))
    }
}

/// `Z(h_sigma)` for the normalised Gaussian:
/// `e^{-sigma^2/2} A(d)^{1/q} (2 pi)^{a/2} p^{d/(2p)} sigma^a`, `a = d (1 - 1/p)`.
pub fn gaussian_lower_bound(params: &RestrictionParams, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Domain(format!("Gaussian width must be > 0, got {sigma}")));
    }
    let a = params.gaussian_exponent();
    Ok((-0.5 * sigma * sigma).exp() * gaussian_base(params) * sigma.powf(a))
}

/// `A(d)^{1/q} (2 pi)^{a/2} p^{d/(2p)}`.
fn gaussian_base(params: &RestrictionParams) -> f64 {
    let d = params.d as f64;
    let a = params.gaussian_exponent();
    params.kernel().sphere_area().powf(1.0 / params.q)
        * (2.0 * PI).powf(0.5 * a)
        * params.p.powf(0.5 * d / params.p)
}

/// Best Gaussian lower bound found numerically, next to the analytic maximum and the
/// literal closed form (which omits the factor `e^{-a/2}`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianOptimum {
    pub bound: f64,
    pub sigma_star: f64,
    /// `e^{-a/2} a^{a/2}` times the base factors.
    pub analytic_bound: f64,
    /// `a^{a/2}` times the base factors.
    pub paper_closed_form: f64,
}

pub const SIGMA_SEARCH_MIN: f64 = 1e-6;
const SIGMA_SEARCH_TOL: f64 = 1e-10;

/// Golden-section maximisation of `gaussian_lower_bound` over `sigma in (1e-6, 10 sqrt(d)]`.
pub fn gaussian_lower_bound_optimized(params: &RestrictionParams) -> GaussianOptimum {
    let a = params.gaussian_exponent();
    let log_objective = |s: f64| -0.5 * s * s + a * s.ln();
    let (sigma_star, _) = golden_section_max(
        log_objective,
        SIGMA_SEARCH_MIN,
        10.0 * (params.d as f64).sqrt(),
        SIGMA_SEARCH_TOL,
    );
    let base = gaussian_base(params);
    let peak = if a > 0.0 { a.powf(0.5 * a) } else { 1.0 };
    GaussianOptimum {
        bound: gaussian_lower_bound(params, sigma_star).expect("sigma_star > 0"),
        sigma_star,
        analytic_bound: (-0.5 * a).exp() * peak * base,
        paper_closed_form: peak * base,
    }
}

/// Maximiser and maximum of a unimodal function on `[lo, hi]`.
fn golden_section_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mut best = 0.5 * (a + b);
    let mut best_value = f(best);
    for x in [lo, hi] {
        let v = f(x);
        if v > best_value {
            best = x;
            best_value = v;
        }
    }
    (best, best_value)
}

/// `I = int_0^inf r^beta |J_{(d-2)/2}(r)|^{p'} dr`.
pub fn kernel_integral(params: &RestrictionParams, tol: impl Into<Tolerance>) -> Result<QuadResult> {
    check_convergence(params)?;
    let beta = params.beta.expect("p > 1 inside the window");
    let order = params.kernel().order();
    let spec = OscillatoryIntegrand::power_weighted(order, beta, params.p_prime)?;
    integrate_oscillatory_bessel(&spec, tol)?.require_converged("kernel integral")
}

/// The sharp radial constant by two routes: first principles (the dual norm of the kernel
/// with full sphere-area normalisation) and the literal closed form with coefficient `P`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharpConstantResult {
    pub params: RestrictionParams,
    pub kernel_integral: QuadResult,
    pub k_rad_first_principles: f64,
    pub k_rad_paper_closed_form: f64,
    /// Error of `k_rad_first_principles` propagated from the kernel integral.
    pub error_estimate: f64,
}

impl SharpConstantResult {
    /// `K(d, p, q)` at another `q`; the constant depends on `q` only through `A(d)^{1/q}`.
    pub fn rescaled_to_q(&self, q: f64) -> Result<Self> {
        let params = self.params.with_q(q)?;
        let area = self.params.kernel().sphere_area();
        let factor = area.powf(1.0 / q - 1.0 / self.params.q);
        Ok(Self {
            params,
            kernel_integral: self.kernel_integral,
            k_rad_first_principles: factor * self.k_rad_first_principles,
            k_rad_paper_closed_form: factor * self.k_rad_paper_closed_form,
            error_estimate: factor * self.error_estimate,
        })
    }
}

/// `A(d)^{1/q - 1/p} (2 pi)^{d/2} I^{1/p'}`.
pub fn sharp_radial_constant(
    params: &RestrictionParams,
    tol: impl Into<Tolerance>,
) -> Result<SharpConstantResult> {
    let integral = kernel_integral(params, tol)?;
    let (d, p, q, pp) = (params.d as f64, params.p, params.q, params.p_prime);
    let area = params.kernel().sphere_area();
    let dual_norm = integral.value.powf(1.0 / pp);
    let k = area.powf(1.0 / q - 1.0 / p) * (2.0 * PI).powf(0.5 * d) * dual_norm;
    let coefficient = 2f64.powf(-1.0 / p)
        * gamma(0.5 * d)?.powf(1.0 / p)
        * area.powf(1.0 / q)
        * (2.0 * PI).powf(-0.5 * d / pp);
    Ok(SharpConstantResult {
        params: *params,
        kernel_integral: integral,
        k_rad_first_principles: k,
        k_rad_paper_closed_form: coefficient * dual_norm,
        error_estimate: k * integral.error_estimate / (pp * integral.value),
    })
}

/// The normalised maximiser `F0 = C sign(g) |g|^{1/(p-1)}` with
/// `g(r) = r^{1-d} V_d(1, r) = (2 pi)^{d/2} J_nu(r) r^{1-d/2}`.
#[derive(Debug, Clone)]
pub struct ExtremalProfile {
    pub params: RestrictionParams,
    /// `C = (A(d) (2 pi)^{d p'/2} I)^{-1/p}`, making `||F0||_p = 1`.
    pub normalization: f64,
    pub kernel_integral: QuadResult,
    profile: RadialProfile,
}

impl ExtremalProfile {
    pub fn profile(&self) -> &RadialProfile {
        &self.profile
    }

    pub fn into_profile(self) -> RadialProfile {
        self.profile
    }
}

pub fn extremal_profile(
    params: &RestrictionParams,
    tol: impl Into<Tolerance>,
) -> Result<ExtremalProfile> {
    let integral = kernel_integral(params, tol)?;
    let kernel = params.kernel();
    let order = kernel.order();
    let (d, p, pp) = (params.d as f64, params.p, params.p_prime);
    let scale = (2.0 * PI).powf(0.5 * d);
    let c = (kernel.sphere_area() * scale.powf(pp) * integral.value).powf(-1.0 / p);
    let power = 1.0 / (p - 1.0);
    let nu = order.nu();
    let at_origin = scale * 2f64.powf(-nu) / gamma(nu + 1.0)?;
    let g = move |r: f64| {
        if r == 0.0 {
            at_origin
        } else {
            scale * bessel_j(order, r) * r.powf(1.0 - 0.5 * d)
        }
    };
    let decay = DecayClass::Algebraic {
        coefficient: c * (scale * (2.0 / PI).sqrt()).powf(power),
        exponent: 0.5 * (d - 1.0) * power,
    };
    let profile = RadialProfile::new(
        format!("extremal(d={}, p={})", params.d, p),
        decay,
        move |r| {
            let v = g(r);
            c * v.signum() * v.abs().powf(power)
        },
    )?
    .with_nodes(order);
    Ok(ExtremalProfile {
        params: *params,
        normalization: c,
        kernel_integral: integral,
        profile,
    })
}

/// `Z(f) = ||f^||_{L_q(S^{d-1})} / ||f||_p` with both quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioZ {
    pub value: f64,
    pub sphere_norm: f64,
    pub transform: TransformValue,
    pub lp_norm: NormValue,
    /// Error of `value` propagated from both integrals.
    pub error_estimate: f64,
}

pub fn ratio_z(
    params: &RestrictionParams,
    profile: &RadialProfile,
    tol: impl Into<Tolerance>,
) -> Result<RatioZ> {
    let tol = tol.into();
    let kernel = params.kernel();
    let lp_norm = radial_lp_norm(&kernel, profile, params.p, tol)?;
    if !(lp_norm.value > 0.0) {
        return Err(Error::Domain(format!(
            "profile '{}' has zero L_{} norm; the ratio is undefined",
            profile.label(),
            params.p
        )));
    }
    let (sphere_norm, transform) = sphere_norm_of_radial_hat(&kernel, profile, params.q, tol)?;
    let value = sphere_norm / lp_norm.value;
    let area_factor = kernel.sphere_area().powf(1.0 / params.q);
    let relative = if transform.value != 0.0 {
        transform.quad.error_estimate / transform.value.abs()
    } else {
        0.0
    };
    let error_estimate = value * (relative + lp_norm.error_estimate / lp_norm.value)
        + if transform.value == 0.0 {
            area_factor * transform.quad.error_estimate / lp_norm.value
        } else {
            0.0
        };
    Ok(RatioZ {
        value,
        sphere_norm,
        transform,
        lp_norm,
        error_estimate,
    })
}

/// One row of the first-principles vs closed-form comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyRow {
    pub d: u32,
    pub p: f64,
    pub q: f64,
    pub k_rad_first_principles: Option<f64>,
    pub k_rad_paper_closed_form: Option<f64>,
    /// `literal closed form / first principles`.
    pub k_rad_ratio: Option<f64>,
    pub gaussian_numeric_optimum: f64,
    pub gaussian_paper_closed_form: f64,
    /// `literal closed form / numeric`.
    pub gaussian_ratio: f64,
    /// `e^{a/2}`, `a = d (1 - 1/p)`.
    pub predicted_discrepancy: f64,
    pub tomas_stein_ok: bool,
    /// Set when the row could not be computed.
    pub failure: Option<String>,
}

impl ConsistencyRow {
    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }
}

fn consistency_row(params: &RestrictionParams, tol: Tolerance) -> ConsistencyRow {
    let gauss = gaussian_lower_bound_optimized(params);
    let sharp = sharp_radial_constant(params, tol);
    let (k, k_paper, failure) = match &sharp {
        Ok(s) => (Some(s.k_rad_first_principles), Some(s.k_rad_paper_closed_form), None),
        Err(e) => (None, None, Some(e.to_string())),
    };
    ConsistencyRow {
        d: params.d,
        p: params.p,
        q: params.q,
        k_rad_first_principles: k,
        k_rad_paper_closed_form: k_paper,
        k_rad_ratio: k.zip(k_paper).map(|(a, b)| b / a),
        gaussian_numeric_optimum: gauss.bound,
        gaussian_paper_closed_form: gauss.paper_closed_form,
        gaussian_ratio: gauss.paper_closed_form / gauss.bound,
        predicted_discrepancy: (0.5 * params.gaussian_exponent()).exp(),
        tomas_stein_ok: tomas_stein_admissible(params),
        failure,
    }
}

/// Rows in grid order; a failing point is marked rather than aborting the table.
pub fn consistency_report(grid: &[RestrictionParams], tol: impl Into<Tolerance>) -> Vec<ConsistencyRow> {
    let tol = tol.into();
    grid.par_iter().map(|p| consistency_row(p, tol)).collect()
}

/// Order of the Bessel function in the kernel for dimension `d`.
pub fn kernel_order(d: u32) -> Result<BesselOrder> {
    BesselOrder::for_dimension(d)
}
