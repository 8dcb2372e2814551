//! Radial profiles `f(x) = F(|x|)` on `R^d`, their Fourier transforms through the
//! Hankel-type kernel, radial `L_p` norms and the `L_q` norm of the transform on the unit
//! sphere.
//!
//! Normalisation: with `f^(k) = int e^{-i k.x} f(x) dx`, every radial integral over `R^d`
//! carries the full sphere area `A(d) = 2 pi^{d/2} / Gamma(d/2)`:
//! `int_{R^d} |f|^p dx = A(d) int_0^inf r^{d-1} |F(r)|^p dr`.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_by_pieces, integrate_finite, integrate_semi_infinite_decaying, scaled_bessel_zeros,
    uniform_breakpoints, QuadResult, ScalarFn, TailSummation, Tolerance,
};
use crate::special_fns::{bessel_j, BesselOrder, BesselZeros, RadialKernel};

/// How a profile behaves at infinity; selects the quadrature strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayClass {
    /// `|F(r)| <= C exp(-r^2 / (2 sigma^2))` up to polynomial factors.
    Gaussian { sigma: f64 },
    /// `F(r) = 0` for `r > radius`.
    CompactSupport { radius: f64 },
    /// `|F(r)| <= coefficient * r^-exponent` for large `r`.
    Algebraic { coefficient: f64, exponent: f64 },
}

impl DecayClass {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            DecayClass::Gaussian { sigma } => sigma > 0.0 && sigma.is_finite(),
            DecayClass::CompactSupport { radius } => radius > 0.0 && radius.is_finite(),
            DecayClass::Algebraic {
                coefficient,
                exponent,
            } => coefficient >= 0.0 && coefficient.is_finite() && exponent.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid decay class {self:?}")))
        }
    }

    fn combine(a: DecayClass, b: DecayClass, wa: f64, wb: f64) -> DecayClass {
        use DecayClass::*;
        match (a, b) {
            (Algebraic { coefficient: c1, exponent: e1 }, Algebraic { coefficient: c2, exponent: e2 }) => {
                Algebraic {
                    coefficient: wa.abs() * c1 + wb.abs() * c2,
                    exponent: e1.min(e2),
                }
            }
            (Algebraic { coefficient, exponent }, _) => Algebraic {
                coefficient: wa.abs() * coefficient,
                exponent,
            },
            (_, Algebraic { coefficient, exponent }) => Algebraic {
                coefficient: wb.abs() * coefficient,
                exponent,
            },
            (Gaussian { sigma: s1 }, Gaussian { sigma: s2 }) => Gaussian { sigma: s1.max(s2) },
            (Gaussian { sigma }, CompactSupport { .. }) | (CompactSupport { .. }, Gaussian { sigma }) => {
                Gaussian { sigma }
            }
            (CompactSupport { radius: r1 }, CompactSupport { radius: r2 }) => {
                CompactSupport { radius: r1.max(r2) }
            }
        }
    }
}

/// A radial function `F(r)`, `r > 0`, with its decay metadata.
#[derive(Clone)]
pub struct RadialProfile {
    f: ScalarFn,
    decay: DecayClass,
    nodes: Option<BesselOrder>,
    /// Interior points where `F` may jump or lose smoothness, ascending.
    breaks: Vec<f64>,
    label: String,
}

impl std::fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialProfile")
            .field("label", &self.label)
            .field("decay", &self.decay)
            .field("nodes", &self.nodes)
            .field("breaks", &self.breaks)
            .finish()
    }
}

impl RadialProfile {
    pub fn new<F>(label: impl Into<String>, decay: DecayClass, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        decay.validate()?;
        Ok(Self {
            f: Arc::new(f),
            decay,
            nodes: None,
            breaks: Vec::new(),
            label: label.into(),
        })
    }

    /// Declares that the sign changes of `F` sit at the zeros of `J_order(r)`; algebraic
    /// profiles are then integrated arch by arch between those zeros.
    pub fn with_nodes(mut self, order: BesselOrder) -> Self {
        self.nodes = Some(order);
        self
    }

    /// The normalised Gaussian density `(2 pi)^{-d/2} sigma^{-d} exp(-r^2 / (2 sigma^2))`.
    pub fn gaussian(sigma: f64, d: u32) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Domain(format!("Gaussian width must be > 0, got {sigma}")));
        }
        if d < 2 {
            return Err(Error::Domain(format!("dimension must be >= 2, got {d}")));
        }
        let scale = (2.0 * PI).powf(-0.5 * d as f64) * sigma.powi(-(d as i32));
        let inv = 0.5 / (sigma * sigma);
        Self::new(
            format!("gaussian(sigma={sigma}, d={d})"),
            DecayClass::Gaussian { sigma },
            move |r| scale * (-inv * r * r).exp(),
        )
    }

    /// `F = 1` on `[0, radius]`, zero beyond.
    pub fn indicator(radius: f64) -> Result<Self> {
        Self::new(
            format!("indicator(R={radius})"),
            DecayClass::CompactSupport { radius },
            move |r| if r <= radius { 1.0 } else { 0.0 },
        )
    }

    pub fn zero() -> Self {
        Self::new("zero", DecayClass::CompactSupport { radius: 1.0 }, |_| 0.0)
            .expect("valid decay")
    }

    /// `c F`.
    pub fn scaled(&self, c: f64) -> Self {
        let f = Arc::clone(&self.f);
        let decay = match self.decay {
            DecayClass::Algebraic {
                coefficient,
                exponent,
            } => DecayClass::Algebraic {
                coefficient: coefficient * c.abs(),
                exponent,
            },
            other => other,
        };
        Self {
            f: Arc::new(move |r| c * f(r)),
            decay,
            nodes: self.nodes,
            breaks: self.breaks.clone(),
            label: format!("{c} * {}", self.label),
        }
    }

    /// `a F + b H`.
    pub fn linear_combination(a: f64, first: &Self, b: f64, second: &Self) -> Self {
        let (f, h) = (Arc::clone(&first.f), Arc::clone(&second.f));
        let nodes = match (first.nodes, second.nodes) {
            (Some(x), Some(y)) if x == y => Some(x),
            _ => None,
        };
        let decay = DecayClass::combine(first.decay, second.decay, a, b);
        let mut breaks: Vec<f64> = first.breaks.iter().chain(&second.breaks).copied().collect();
        for part in [first.decay, second.decay] {
            if let DecayClass::CompactSupport { radius } = part {
                breaks.push(radius);
            }
        }
        if let DecayClass::CompactSupport { radius } = decay {
            breaks.retain(|&x| x < radius);
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        Self {
            f: Arc::new(move |r| a * f(r) + b * h(r)),
            decay,
            nodes,
            breaks,
            label: format!("{a} * {} + {b} * {}", first.label, second.label),
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.f)(r)
    }

    pub fn decay(&self) -> DecayClass {
        self.decay
    }

    pub fn nodes(&self) -> Option<BesselOrder> {
        self.nodes
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// `V_d(s, r) = (2 pi)^{d/2} J_{(d-2)/2}(s r) s^{(2-d)/2} r^{d/2}`.
pub fn kernel_v(kernel: &RadialKernel, s: f64, r: f64) -> f64 {
    let d = kernel.d() as f64;
    (2.0 * PI).powf(0.5 * d)
        * bessel_j(kernel.order(), s * r)
        * s.powf(1.0 - 0.5 * d)
        * r.powf(0.5 * d)
}

/// `G(s)`, the value of the radial Fourier transform at frequency radius `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformValue {
    pub s: f64,
    pub value: f64,
    pub quad: QuadResult,
}

/// A norm `(A(d) int ...)^{1/p}` with the quadrature of the underlying integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormValue {
    pub value: f64,
    pub integral: QuadResult,
    /// Error of `value` propagated from the integral.
    pub error_estimate: f64,
}

fn lp_propagated_error(integral: &QuadResult, value: f64, p: f64) -> f64 {
    if integral.value > 0.0 {
        value * integral.error_estimate / (p * integral.value)
    } else {
        integral.error_estimate.powf(1.0 / p)
    }
}

/// `int_0^inf w(r) F(r)`-type integrals dispatched on the profile's decay class.
/// `decay_exponent` is the envelope decay of the integrand for algebraic profiles.
fn integrate_profile<W>(
    profile: &RadialProfile,
    integrand: W,
    algebraic_breaks: Option<Box<dyn Iterator<Item = f64>>>,
    decay_exponent: f64,
    summation_hint: Option<TailSummation>,
    tol: Tolerance,
) -> Result<QuadResult>
where
    W: Fn(f64) -> f64,
{
    let jumps = &profile.breaks;
    let Some(&last) = jumps.last() else {
        return integrate_profile_from(profile.decay, &integrand, 0.0, algebraic_breaks, decay_exponent, summation_hint, tol);
    };
    let mut total = QuadResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
        converged: true,
    };
    let mut left = 0.0;
    for &right in jumps {
        add_into(&mut total, integrate_finite(&integrand, left, right, tol)?);
        left = right;
    }
    let rest = algebraic_breaks.map(|b| Box::new(b.filter(move |&x| x > last)) as Box<dyn Iterator<Item = f64>>);
    add_into(
        &mut total,
        integrate_profile_from(profile.decay, &integrand, last, rest, decay_exponent, summation_hint, tol)?,
    );
    Ok(total)
}

fn add_into(total: &mut QuadResult, part: QuadResult) {
    total.value += part.value;
    total.error_estimate += part.error_estimate;
    total.evaluations += part.evaluations;
    total.converged &= part.converged;
}

/// The integral over `[start, inf)`, with `F` smooth there apart from the declared nodes.
fn integrate_profile_from<W>(
    decay: DecayClass,
    integrand: &W,
    start: f64,
    algebraic_breaks: Option<Box<dyn Iterator<Item = f64>>>,
    decay_exponent: f64,
    summation_hint: Option<TailSummation>,
    tol: Tolerance,
) -> Result<QuadResult>
where
    W: Fn(f64) -> f64,
{
    match decay {
        DecayClass::CompactSupport { radius } => integrate_finite(integrand, start, radius, tol),
        DecayClass::Gaussian { sigma } => {
            let mut out = integrate_semi_infinite_decaying(|u| sigma * integrand(start + sigma * u), tol)?;
            out.error_estimate = out.error_estimate.abs();
            Ok(out)
        }
        DecayClass::Algebraic { .. } => {
            let breaks = algebraic_breaks.unwrap_or_else(|| Box::new(uniform_breakpoints(start, PI)));
            let summation = summation_hint.unwrap_or(TailSummation::Auto {
                decay: decay_exponent,
            });
            integrate_by_pieces(integrand, start, breaks, summation, tol)
        }
    }
}

/// `G(s) = int_0^inf V_d(s, r) F(r) dr`.
pub fn radial_hat(
    kernel: &RadialKernel,
    profile: &RadialProfile,
    s: f64,
    tol: impl Into<Tolerance>,
) -> Result<TransformValue> {
    let tol = tol.into();
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!("transform radius must be > 0, got {s}")));
    }
    let d = kernel.d() as f64;
    let mut decay_exponent = 0.0;
    if let DecayClass::Algebraic { exponent, .. } = profile.decay {
        if !(exponent > 0.5 * (d + 1.0)) {
            return Err(Error::Divergence(format!(
                "an algebraic profile needs decay exponent > (d+1)/2 = {} for an absolutely \
                 convergent transform, got {exponent}",
                0.5 * (d + 1.0)
            )));
        }
        decay_exponent = exponent - 0.5 * (d - 1.0);
    }
    let breaks: Box<dyn Iterator<Item = f64>> =
        Box::new(scaled_bessel_zeros(kernel.order(), s));
    let quad = integrate_profile(
        profile,
        |r| {
            let f = profile.eval(r);
            if f == 0.0 {
                0.0
            } else {
                kernel_v(kernel, s, r) * f
            }
        },
        Some(breaks),
        decay_exponent,
        None,
        tol,
    )?;
    Ok(TransformValue {
        s,
        value: quad.value,
        quad,
    })
}

/// `int_{R^d} f dx = A(d) int_0^inf r^{d-1} F(r) dr`, the limit of `G(s)` as `s -> 0+`.
pub fn radial_full_integral(
    kernel: &RadialKernel,
    profile: &RadialProfile,
    tol: impl Into<Tolerance>,
) -> Result<QuadResult> {
    let tol = tol.into();
    let d = kernel.d() as f64;
    let mut decay_exponent = 0.0;
    if let DecayClass::Algebraic { exponent, .. } = profile.decay {
        if !(exponent > d) {
            return Err(Error::Divergence(format!(
                "r^(d-1) F(r) is not integrable: decay exponent {exponent} must exceed d = {d}"
            )));
        }
        decay_exponent = exponent - (d - 1.0);
    }
    let breaks = profile
        .nodes
        .map(|o| Box::new(BesselZeros::new(o)) as Box<dyn Iterator<Item = f64>>);
    let area = kernel.sphere_area();
    let mut quad = integrate_profile(
        profile,
        |r| r.powf(d - 1.0) * profile.eval(r),
        breaks,
        decay_exponent,
        None,
        tol.scaled(1.0 / area),
    )?;
    quad.value *= area;
    quad.error_estimate *= area;
    Ok(quad)
}

/// `||f||_p = (A(d) int_0^inf r^{d-1} |F(r)|^p dr)^{1/p}`, `p >= 1`.
pub fn radial_lp_norm(
    kernel: &RadialKernel,
    profile: &RadialProfile,
    p: f64,
    tol: impl Into<Tolerance>,
) -> Result<NormValue> {
    let tol = tol.into();
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("norm exponent must satisfy 1 <= p < inf, got {p}")));
    }
    let d = kernel.d() as f64;
    let mut decay_exponent = 0.0;
    if let DecayClass::Algebraic { exponent, .. } = profile.decay {
        if !(p * exponent > d) {
            return Err(Error::Divergence(format!(
                "r^(d-1) |F|^p is not integrable: p * decay exponent = {} must exceed d = {d}",
                p * exponent
            )));
        }
        decay_exponent = p * exponent - (d - 1.0);
    }
    let breaks = profile
        .nodes
        .map(|o| Box::new(BesselZeros::new(o)) as Box<dyn Iterator<Item = f64>>);
    let area = kernel.sphere_area();
    let mut integral = integrate_profile(
        profile,
        |r| {
            let f = profile.eval(r);
            if f == 0.0 {
                0.0
            } else {
                r.powf(d - 1.0) * f.abs().powf(p)
            }
        },
        breaks,
        decay_exponent,
        matches!(profile.decay, DecayClass::Algebraic { .. }).then_some(TailSummation::AlgebraicTail {
            decay: decay_exponent,
        }),
        tol.scaled(if p > 1.0 { p } else { 1.0 }),
    )?;
    integral.value = integral.value.max(0.0);
    let base = area * integral.value;
    let value = base.powf(1.0 / p);
    let scaled = QuadResult {
        value: base,
        error_estimate: area * integral.error_estimate,
        ..integral
    };
    Ok(NormValue {
        value,
        error_estimate: lp_propagated_error(&scaled, value, p),
        integral,
    })
}

/// `||f^||_{L_q(S^{d-1})} = A(d)^{1/q} |G(1)|`; the transform of a radial function is
/// constant on the unit sphere.
pub fn sphere_norm_of_radial_hat(
    kernel: &RadialKernel,
    profile: &RadialProfile,
    q: f64,
    tol: impl Into<Tolerance>,
) -> Result<(f64, TransformValue)> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::Domain(format!("sphere norm exponent must satisfy 1 <= q < inf, got {q}")));
    }
    let transform = radial_hat(kernel, profile, 1.0, tol)?;
    Ok((kernel.sphere_area().powf(1.0 / q) * transform.value.abs(), transform))
}

/// Closed form `||h_sigma||_p = (2 pi)^{-(d/2)(1-1/p)} sigma^{-d(1-1/p)} p^{-d/(2p)}`.
pub fn gaussian_lp_norm_closed_form(sigma: f64, d: u32, p: f64) -> f64 {
    let d = d as f64;
    let a = 1.0 - 1.0 / p;
    (2.0 * PI).powf(-0.5 * d * a) * sigma.powf(-d * a) * p.powf(-0.5 * d / p)
}
