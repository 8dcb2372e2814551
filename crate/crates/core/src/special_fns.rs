//! Gamma function, Bessel functions of the first kind of real order `nu >= 0`,
//! their positive zeros, and surface areas of unit spheres.
//!
//! `J_nu(x)` is evaluated by one of three methods depending on `(nu, x)`:
//!
//! - ascending power series when `x^2/4 <= nu + 1`, where the terms decrease from the start;
//! - Miller's backward recurrence, normalised with the Neumann sum
//!   `(x/2)^mu = sum_k (mu + 2k) Gamma(mu + k) / k! * J_{mu+2k}(x)`, in the transition zone;
//! - the Hankel asymptotic expansion with explicit phase once `x >= 25 + nu^2/2`.
//!
//! Half-integer orders (odd dimensions) additionally have an elementary closed form, the
//! terminating Hankel expansion, which is used whenever it is free of cancellation.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// Lanczos approximation with `g = 7` and nine coefficients, the set published in
/// Numerical Recipes (3rd ed.) and reproduced by the GNU Scientific Library:
///
/// `Gamma(z + 1) = sqrt(2 pi) (z + g + 1/2)^(z + 1/2) e^-(z + g + 1/2) A_g(z)`,
/// `A_g(z) = c_0 + sum_{i=1}^{8} c_i / (z + i)`.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest argument for which `Gamma(x)` is finite in `f64`.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

/// Euler's Gamma function for `x > 0`.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!("gamma requires x > 0, got {x}")));
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::Overflow(format!(
            "gamma({x}) exceeds the largest finite double"
        )));
    }
    let value = gamma_positive(x);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!("gamma({x}) is not representable")))
    }
}

fn lanczos_sum(z: f64) -> f64 {
    LANCZOS_COEFFS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS_COEFFS[0], |acc, (i, c)| acc + c / (z + (i + 1) as f64))
}

fn gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_positive(1.0 - x));
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // t^(z+1/2) is split in two halves so that it does not overflow before e^-t is applied.
    let half = t.powf(0.5 * (z + 0.5));
    SQRT_2PI * half * ((-t).exp() * half) * lanczos_sum(z)
}

/// Natural logarithm of `Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_positive(x))
}

fn ln_gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma_positive(1.0 - x);
    }
    if x <= 100.0 {
        return gamma_positive(x).ln();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    SQRT_2PI.ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// Surface measure of the unit sphere `S^{d-1}` in `R^d`: `2 pi^{d/2} / Gamma(d/2)`.
pub fn sphere_area(d: u32) -> Result<f64> {
    if d < 2 {
        return Err(Error::Domain(format!("sphere_area requires d >= 2, got {d}")));
    }
    if d <= 64 {
        // A(d + 2) = 2 pi A(d) / d, seeded with the circle and the 2-sphere.
        let (mut area, mut k) = if d.is_multiple_of(2) { (2.0 * PI, 2) } else { (4.0 * PI, 3) };
        while k < d {
            area *= 2.0 * PI / k as f64;
            k += 2;
        }
        return Ok(area);
    }
    let half = 0.5 * d as f64;
    Ok((std::f64::consts::LN_2 + half * PI.ln() - ln_gamma_positive(half)).exp())
}

/// Order `nu >= 0` of a Bessel function of the first kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder {
    nu: f64,
    half_integer: bool,
}

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu < 0.0 {
            return Err(Error::Domain(format!(
                "Bessel order must be finite and >= 0, got {nu}"
            )));
        }
        let twice = 2.0 * nu;
        let half_integer = twice.fract() == 0.0 && twice % 2.0 == 1.0;
        Ok(Self { nu, half_integer })
    }

    /// The order `(d - 2)/2` attached to the radial Fourier transform in `R^d`.
    pub fn for_dimension(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("dimension must be >= 2, got {d}")));
        }
        Self::new(0.5 * (d as f64 - 2.0))
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// True iff `2 nu` is an odd integer.
    pub fn is_half_integer(&self) -> bool {
        self.half_integer
    }

    /// `Some(n)` when `nu = n + 1/2`.
    pub fn spherical_index(&self) -> Option<u32> {
        self.half_integer.then(|| (self.nu - 0.5).round() as u32)
    }

    /// The order `nu + 1`.
    pub fn raised(&self) -> Self {
        Self {
            nu: self.nu + 1.0,
            half_integer: self.half_integer,
        }
    }
}

/// Dimension-dependent data of the radial Fourier transform in `R^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialKernel {
    d: u32,
    order: BesselOrder,
    sphere_area: f64,
}

impl RadialKernel {
    pub fn new(d: u32) -> Result<Self> {
        Ok(Self {
            d,
            order: BesselOrder::for_dimension(d)?,
            sphere_area: sphere_area(d)?,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn order(&self) -> BesselOrder {
        self.order
    }

    /// Surface measure of `S^{d-1}`.
    pub fn sphere_area(&self) -> f64 {
        self.sphere_area
    }
}

/// `J_nu(x)` for `x >= 0`. Negative or NaN arguments return NaN.
pub fn bessel_j(order: BesselOrder, x: f64) -> f64 {
    if x.is_nan() || x < 0.0 {
        return f64::NAN;
    }
    if x == 0.0 {
        return if order.nu == 0.0 { 1.0 } else { 0.0 };
    }
    if let Some(n) = order.spherical_index() {
        if x >= closed_form_threshold(n) {
            return half_integer_closed_form(n, x);
        }
    }
    bessel_j_real(order.nu, x)
}

/// `J_nu(x)` by the general real-order path, bypassing the half-integer closed form.
pub fn bessel_j_real(nu: f64, x: f64) -> f64 {
    if x.is_nan() || x < 0.0 || nu.is_nan() || nu < 0.0 {
        return f64::NAN;
    }
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if 0.25 * x * x <= nu + 1.0 {
        series(nu, x)
    } else if x >= 25.0 + 0.5 * nu * nu {
        hankel_asymptotic(nu, x)
    } else {
        miller(nu, x)
    }
}

fn closed_form_threshold(n: u32) -> f64 {
    let n = n as f64;
    (0.5 * n * (n + 1.0)).max(1e-300)
}

/// `J_{n+1/2}(x) = sqrt(2/(pi x)) [P_n(x) sin(x - n pi/2) + Q_n(x) cos(x - n pi/2)]`,
/// with the finite sums `P_n, Q_n` in powers of `1/x` built from
/// `(n + k)! / (2^k k! (n - k)!)`.
///
/// Exact for every `x > 0`; loses digits to cancellation when `x` is much smaller than
/// `n (n + 1) / 2`.
pub fn half_integer_closed_form(n: u32, x: f64) -> f64 {
    let mut even = 0.0;
    let mut odd = 0.0;
    let mut coeff = 1.0;
    let mut power = 1.0;
    for k in 0..=n {
        if k > 0 {
            let k_f = k as f64;
            coeff *= (n as f64 + k_f) * (n as f64 - k_f + 1.0) / (2.0 * k_f);
            power /= x;
        }
        let term = coeff * power;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            even += sign * term;
        } else {
            odd += sign * term;
        }
    }
    let (s, c) = shifted_sin_cos(x, n);
    (2.0 / (PI * x)).sqrt() * (even * s + odd * c)
}

/// `(sin(x - n pi/2), cos(x - n pi/2))` without forming the shifted argument.
fn shifted_sin_cos(x: f64, n: u32) -> (f64, f64) {
    let (s, c) = x.sin_cos();
    match n % 4 {
        0 => (s, c),
        1 => (-c, s),
        2 => (-s, -c),
        _ => (c, -s),
    }
}

fn series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let prefactor = if nu <= 170.0 {
        half.powf(nu) / gamma_positive(nu + 1.0)
    } else {
        (nu * half.ln() - ln_gamma_positive(nu + 1.0)).exp()
    };
    if prefactor == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        let k_f = k as f64;
        term *= q / (k_f * (nu + k_f));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    prefactor * sum
}

fn hankel_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (8.0 * k as f64 * x);
        if next == 0.0 {
            break;
        }
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 * (p.abs() + q.abs()) {
            break;
        }
    }
    let phi = (0.5 * nu + 0.25) * PI;
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

fn miller(nu: f64, x: f64) -> f64 {
    let n0 = nu.floor();
    let mu = nu - n0;
    let n0 = n0 as usize;
    let reference = (n0 as f64).max(x);
    let top = (reference + (160.0 * reference).sqrt() + 16.0).ceil() as usize;

    // vals[k] is proportional to J_{mu + k}(x).
    let mut vals = vec![0.0_f64; top + 2];
    vals[top] = 1e-30;
    for k in (1..=top).rev() {
        vals[k - 1] = 2.0 * (mu + k as f64) / x * vals[k] - vals[k + 1];
        if vals[k - 1].abs() > 1e250 {
            for v in vals[k - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }

    let gamma_mu1 = gamma_positive(mu + 1.0);
    let mut norm = gamma_mu1 * vals[0];
    let mut ratio = gamma_mu1; // Gamma(mu + k) / k! at k = 1
    let mut k = 1;
    while 2 * k <= top {
        norm += (mu + 2.0 * k as f64) * ratio * vals[2 * k];
        ratio *= (mu + k as f64) / (k as f64 + 1.0);
        k += 1;
    }
    vals[n0] * (0.5 * x).powf(mu) / norm
}

/// `dJ_nu/dx = (nu / x) J_nu(x) - J_{nu+1}(x)`.
pub fn bessel_j_derivative(order: BesselOrder, x: f64) -> f64 {
    if x == 0.0 {
        let nu = order.nu;
        return if nu == 1.0 {
            0.5
        } else if nu > 0.0 && nu < 1.0 {
            f64::INFINITY
        } else {
            0.0
        };
    }
    order.nu / x * bessel_j(order, x) - bessel_j(order.raised(), x)
}

fn sign(v: f64) -> f64 {
    if v < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Safeguarded Newton iteration inside a bracket `[lo, hi]` whose endpoints have
/// opposite signs of `J_nu`.
fn refine_zero(order: BesselOrder, mut lo: f64, mut hi: f64) -> f64 {
    let lo_sign = sign(bessel_j(order, lo));
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = bessel_j(order, x);
        if f == 0.0 {
            return x;
        }
        if sign(f) == lo_sign {
            lo = x;
        } else {
            hi = x;
        }
        let df = order.nu / x * f - bessel_j(order.raised(), x);
        let mut next = x - f / df;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x || hi - lo <= 4.0 * f64::EPSILON * x {
            return next;
        }
        x = next;
    }
    x
}

/// Sequential enumeration of the positive zeros `j_{nu,1} < j_{nu,2} < ...`.
///
/// Consecutive zeros of `J_nu`, `nu >= 0`, are more than 2.4 apart, so a scan with step 1
/// never skips a sign change. Once two zeros are known the next one is predicted from the
/// last spacing and accepted only if the bracket shows the expected sign pattern.
#[derive(Debug, Clone)]
pub struct BesselZeros {
    order: BesselOrder,
    last: Option<f64>,
    prev: Option<f64>,
    count: usize,
}

impl BesselZeros {
    pub fn new(order: BesselOrder) -> Self {
        Self {
            order,
            last: None,
            prev: None,
            count: 0,
        }
    }

    fn expected_sign(&self) -> f64 {
        if self.count.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    fn predicted_bracket(&self) -> Option<(f64, f64)> {
        let last = self.last?;
        let spacing = match self.prev {
            Some(prev) => last - prev,
            None => PI,
        };
        let guess = last + spacing;
        let (lo, hi) = (guess - 0.4, guess + 0.4);
        let expected = self.expected_sign();
        let ok = sign(bessel_j(self.order, lo)) == expected
            && sign(bessel_j(self.order, hi)) == -expected;
        ok.then_some((lo, hi))
    }

    fn scanned_bracket(&self) -> (f64, f64) {
        let expected = self.expected_sign();
        let mut lo = match self.last {
            Some(last) => last + 1.0,
            None => self.order.nu,
        };
        loop {
            let hi = lo + 1.0;
            if sign(bessel_j(self.order, hi)) != expected {
                return (lo, hi);
            }
            lo = hi;
        }
    }
}

impl Iterator for BesselZeros {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let (lo, hi) = self
            .predicted_bracket()
            .unwrap_or_else(|| self.scanned_bracket());
        let zero = refine_zero(self.order, lo, hi);
        self.prev = self.last;
        self.last = Some(zero);
        self.count += 1;
        Some(zero)
    }
}

/// The first `n` positive zeros of `J_nu`.
pub fn bessel_j_zeros(order: BesselOrder, n: usize) -> Vec<f64> {
    BesselZeros::new(order).take(n).collect()
}

/// McMahon's large-zero expansion of `j_{nu,k}`.
pub fn mcmahon_zero(order: BesselOrder, k: usize) -> f64 {
    let mu = 4.0 * order.nu * order.nu;
    let beta = (k as f64 + 0.5 * order.nu - 0.25) * PI;
    let e = 8.0 * beta;
    beta - (mu - 1.0) / e
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e.powi(3))
        - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * e.powi(5))
}

/// The `k`-th positive zero `j_{nu,k}` of `J_nu`, `k >= 1`.
pub fn bessel_j_zero(order: BesselOrder, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("zero index k must be >= 1".into()));
    }
    let beta = (k as f64 + 0.5 * order.nu - 0.25) * PI;
    if k > 32 && beta > 4.0 * (order.nu + 1.0).powi(2) {
        let guess = mcmahon_zero(order, k);
        let (lo, hi) = (guess - 1.0, guess + 1.0);
        let expected = if k % 2 == 1 { 1.0 } else { -1.0 };
        if sign(bessel_j(order, lo)) == expected && sign(bessel_j(order, hi)) == -expected {
            return Ok(refine_zero(order, lo, hi));
        }
    }
    Ok(BesselZeros::new(order)
        .nth(k - 1)
        .expect("zero enumeration is infinite"))
}
