//! Seeded random radial profiles, an independent reference integrator and the dominance
//! suite that checks `Z(f) <= K` over random profiles.
//!
//! The reference integrator uses double-exponential rules (tanh-sinh, exp-sinh) with
//! uniform step halving. It shares no subdivision or extrapolation code with
//! [`crate::quadrature`].

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{QuadResult, Tolerance};
use crate::radial_fourier::{DecayClass, RadialProfile};
use crate::restriction::{
    extremal_profile, radial_convergence_admissible, ratio_z, sharp_radial_constant,
    RestrictionParams,
};
use crate::special_fns::gamma;

/// Random profile families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileFamily {
    /// Signed sums of one to four Gaussians.
    GaussianMixture,
    /// `P(r) exp(-r^2 / (2 sigma^2))` with `deg P <= 6`.
    PolynomialTimesGaussian,
    /// A smooth bump on `[0, R]`, `R in [0.5, 5]`, modulated by `cos(omega r)`.
    CompactBump,
    /// The three families in turn.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomRadialSpec {
    pub seed: u64,
    pub family: ProfileFamily,
    pub count: usize,
}

/// Parameters that rebuild a generated profile exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProfileParams {
    GaussianMixture { weights: Vec<f64>, sigmas: Vec<f64> },
    PolynomialTimesGaussian { coefficients: Vec<f64>, sigma: f64 },
    CompactBump { radius: f64, amplitude: f64, omega: f64 },
}

impl ProfileParams {
    pub fn build(&self) -> Result<RadialProfile> {
        match self.clone() {
            ProfileParams::GaussianMixture { weights, sigmas } => {
                if weights.len() != sigmas.len() || weights.is_empty() {
                    return Err(Error::Domain("mixture needs matching, nonempty weights and widths".into()));
                }
                let sigma = sigmas.iter().copied().fold(0.0, f64::max);
                let inv: Vec<f64> = sigmas.iter().map(|s| 0.5 / (s * s)).collect();
                RadialProfile::new(
                    format!("gaussian_mixture({} components)", weights.len()),
                    DecayClass::Gaussian { sigma },
                    move |r| weights.iter().zip(&inv).map(|(w, c)| w * (-c * r * r).exp()).sum(),
                )
            }
            ProfileParams::PolynomialTimesGaussian { coefficients, sigma } => {
                let inv = 0.5 / (sigma * sigma);
                RadialProfile::new(
                    format!("polynomial_times_gaussian(degree {})", coefficients.len().saturating_sub(1)),
                    DecayClass::Gaussian { sigma },
                    move |r| {
                        let poly = coefficients.iter().rev().fold(0.0, |acc, c| acc * r + c);
                        poly * (-inv * r * r).exp()
                    },
                )
            }
            ProfileParams::CompactBump { radius, amplitude, omega } => RadialProfile::new(
                format!("compact_bump(R={radius})"),
                DecayClass::CompactSupport { radius },
                move |r| {
                    let x = r / radius;
                    if x >= 1.0 {
                        0.0
                    } else {
                        amplitude * (1.0 - 1.0 / (1.0 - x * x)).exp() * (omega * r).cos()
                    }
                },
            ),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GeneratedProfile {
    pub index: usize,
    pub params: ProfileParams,
    pub profile: RadialProfile,
}

fn draw(rng: &mut ChaCha8Rng, family: ProfileFamily) -> ProfileParams {
    match family {
        ProfileFamily::GaussianMixture => {
            let n = rng.random_range(1..=4usize);
            let weights = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let sigmas = (0..n).map(|_| rng.random_range(0.3..3.0)).collect();
            ProfileParams::GaussianMixture { weights, sigmas }
        }
        ProfileFamily::PolynomialTimesGaussian => {
            let degree = rng.random_range(0..=6usize);
            let coefficients = (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect();
            let sigma = rng.random_range(0.4..2.5);
            ProfileParams::PolynomialTimesGaussian { coefficients, sigma }
        }
        ProfileFamily::CompactBump => ProfileParams::CompactBump {
            radius: rng.random_range(0.5..=5.0),
            amplitude: rng.random_range(0.5..2.0),
            omega: rng.random_range(0.0..4.0),
        },
        ProfileFamily::Mixed => unreachable!("resolved by the caller"),
    }
}

/// Same spec, same parameter stream.
pub fn generate_profile_params(spec: &RandomRadialSpec) -> Vec<ProfileParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    const CYCLE: [ProfileFamily; 3] = [
        ProfileFamily::GaussianMixture,
        ProfileFamily::PolynomialTimesGaussian,
        ProfileFamily::CompactBump,
    ];
    (0..spec.count)
        .map(|i| {
            let family = match spec.family {
                ProfileFamily::Mixed => CYCLE[i % 3],
                f => f,
            };
            draw(&mut rng, family)
        })
        .collect()
}

pub fn generate_profiles(spec: &RandomRadialSpec) -> Vec<GeneratedProfile> {
    generate_profile_params(spec)
        .into_iter()
        .enumerate()
        .map(|(index, params)| GeneratedProfile {
            index,
            profile: params.build().expect("generated parameters are valid"),
            params,
        })
        .collect()
}

/// Integration domains for the reference integrator.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleDomain {
    Finite { a: f64, b: f64 },
    /// `[a, inf)` for integrands decaying faster than any power; `scale` is the length
    /// over which the integrand varies.
    SemiInfinite { a: f64, scale: f64 },
    /// `[a, inf)` split at `breakpoints`, with the remainder handled by `tail`.
    Arches { a: f64, breakpoints: Vec<f64>, tail: ArchTail },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArchTail {
    /// Alternating arches, summed by repeated averaging of partial sums.
    Alternating,
    /// Sign-definite arches, envelope `~ r^-decay`: Richardson extrapolation of the
    /// partial sums in the arch endpoint.
    Algebraic { decay: f64 },
}

const DE_MAX_LEVEL: u32 = 9;

/// Tanh-sinh on `[a, b]` with step halving.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: Tolerance) -> QuadResult {
    let half = 0.5 * (b - a);
    let t_max = 4.0;
    let mut evaluations = 0;
    let node = |t: f64| -> (f64, f64, f64) {
        let u = 0.5 * PI * t.sinh();
        let complement = 2.0 / ((2.0 * u).exp() + 1.0);
        let w = 0.5 * PI * t.cosh() / u.cosh().powi(2);
        (half * complement, half * w, u)
    };
    let mut sum = half * 0.5 * PI * f(a + half);
    evaluations += 1;
    let mut sample = |t: f64| -> f64 {
        let (offset, w, _) = node(t);
        if w == 0.0 || offset == 0.0 {
            return 0.0;
        }
        evaluations += 2;
        w * (f(b - offset) + f(a + offset))
    };
    let mut h = 1.0;
    let mut k = 1;
    while k as f64 * h <= t_max {
        sum += sample(k as f64 * h);
        k += 1;
    }
    let mut estimate = h * sum;
    let mut error = f64::INFINITY;
    for _ in 1..=DE_MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= t_max {
            sum += sample(k as f64 * h);
            k += 2;
        }
        let next = h * sum;
        error = (next - estimate).abs();
        estimate = next;
        if error <= tol.target(estimate) {
            return QuadResult { value: estimate, error_estimate: error, evaluations, converged: true };
        }
    }
    QuadResult { value: estimate, error_estimate: error, evaluations, converged: false }
}

/// Exp-sinh on `[a, inf)`: `r = a + scale * exp(pi/2 sinh t)`.
pub fn exp_sinh<F: Fn(f64) -> f64>(f: &F, a: f64, scale: f64, tol: Tolerance) -> QuadResult {
    let t_lo = -4.5;
    let t_hi = 4.5;
    let mut evaluations = 0;
    let mut sample = |t: f64| -> f64 {
        let e = (0.5 * PI * t.sinh()).exp();
        let w = scale * 0.5 * PI * t.cosh() * e;
        if !w.is_finite() || w == 0.0 {
            return 0.0;
        }
        let v = f(a + scale * e);
        evaluations += 1;
        if v == 0.0 {
            0.0
        } else {
            w * v
        }
    };
    let mut h = 0.5;
    let n_lo = (t_lo / h) as i64;
    let n_hi = (t_hi / h) as i64;
    let mut sum: f64 = (n_lo..=n_hi).map(|k| sample(k as f64 * h)).sum();
    let mut estimate = h * sum;
    let mut error = f64::INFINITY;
    for _ in 1..=DE_MAX_LEVEL {
        h *= 0.5;
        let n_lo = (t_lo / h) as i64;
        let n_hi = (t_hi / h) as i64;
        sum += (n_lo..=n_hi)
            .filter(|k| k.rem_euclid(2) == 1)
            .map(|k| sample(k as f64 * h))
            .sum::<f64>();
        let next = h * sum;
        error = (next - estimate).abs();
        estimate = next;
        if error <= tol.target(estimate) {
            return QuadResult { value: estimate, error_estimate: error, evaluations, converged: true };
        }
    }
    QuadResult { value: estimate, error_estimate: error, evaluations, converged: false }
}

/// Reference value of `int f` over `domain`, run at `tol / 100`.
pub fn oracle_integrate<F>(f: F, domain: &OracleDomain, tol: impl Into<Tolerance>) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    let tol = tol.into();
    let tight = Tolerance {
        rel: (tol.rel / 100.0).max(1e-15),
        abs: tol.abs / 100.0,
    };
    let out = match domain {
        OracleDomain::Finite { a, b } => {
            // Unequal initial split so no node coincides with the production rule.
            let c1 = a + 0.381_966 * (b - a);
            let c2 = a + 0.763_932 * (b - a);
            sum_results([tanh_sinh(&f, *a, c1, tight), tanh_sinh(&f, c1, c2, tight), tanh_sinh(&f, c2, *b, tight)])
        }
        OracleDomain::SemiInfinite { a, scale } => {
            if !(*scale > 0.0) {
                return Err(Error::Domain(format!("oracle scale must be > 0, got {scale}")));
            }
            exp_sinh(&f, *a, *scale, tight)
        }
        OracleDomain::Arches { a, breakpoints, tail } => arches(&f, *a, breakpoints, *tail, tight)?,
    };
    Ok(out)
}

fn sum_results<const N: usize>(parts: [QuadResult; N]) -> QuadResult {
    parts.iter().fold(
        QuadResult { value: 0.0, error_estimate: 0.0, evaluations: 0, converged: true },
        |acc, p| QuadResult {
            value: acc.value + p.value,
            error_estimate: acc.error_estimate + p.error_estimate,
            evaluations: acc.evaluations + p.evaluations,
            converged: acc.converged && p.converged,
        },
    )
}

fn arches<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    breakpoints: &[f64],
    tail: ArchTail,
    tol: Tolerance,
) -> Result<QuadResult> {
    if breakpoints.len() < 16 {
        return Err(Error::Domain("the arch oracle needs at least 16 breakpoints".into()));
    }
    let mut left = a;
    let mut sums = Vec::with_capacity(breakpoints.len());
    let mut running = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut converged = true;
    for &right in breakpoints {
        let piece = tanh_sinh(f, left, right, tol);
        running += piece.value;
        error += piece.error_estimate;
        evaluations += piece.evaluations;
        converged &= piece.converged;
        sums.push(running);
        left = right;
    }
    let (value, extrapolation_error) = match tail {
        ArchTail::Alternating => repeated_averaging(&sums),
        ArchTail::Algebraic { decay } => {
            if !(decay > 1.0) {
                return Err(Error::Divergence(format!("arch envelope decay {decay} must exceed 1")));
            }
            richardson_in_endpoint(&sums, breakpoints, decay)
        }
    };
    let error_estimate = error + extrapolation_error;
    Ok(QuadResult {
        value,
        error_estimate,
        evaluations,
        converged: converged && error_estimate <= tol.target(value) * 100.0,
    })
}

/// Repeated pairwise averaging of the last partial sums.
fn repeated_averaging(sums: &[f64]) -> (f64, f64) {
    let depth = (sums.len() - 1).min(40);
    let mut row: Vec<f64> = sums[sums.len() - depth - 1..].to_vec();
    let mut previous = *row.last().unwrap();
    let mut change = f64::INFINITY;
    while row.len() > 1 {
        row = row.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let current = *row.last().unwrap();
        change = (current - previous).abs();
        previous = current;
    }
    (previous, change)
}

/// Richardson elimination of `x^{1-decay-j}`, `j = 0..4`, at endpoints `x_N`, `N` halving.
fn richardson_in_endpoint(sums: &[f64], ends: &[f64], decay: f64) -> (f64, f64) {
    let terms = 5usize;
    let mut indices = Vec::new();
    let mut n = sums.len();
    while indices.len() < terms + 1 && n >= 4 {
        indices.push(n - 1);
        n /= 2;
    }
    indices.reverse();
    let solve = |idx: &[usize]| -> f64 {
        // Unknowns S, c_0..c_{m-2}; rows S - sum c_j x^{1-decay-j} = sums[i].
        let m = idx.len();
        let mut mat = vec![vec![0.0; m + 1]; m];
        for (row, &i) in idx.iter().enumerate() {
            let x: f64 = ends[i];
            mat[row][0] = 1.0;
            for j in 1..m {
                mat[row][j] = -x.powf(1.0 - decay - (j - 1) as f64);
            }
            mat[row][m] = sums[i];
        }
        gaussian_elimination(mat)[0]
    };
    let full = solve(&indices);
    let reduced = solve(&indices[1..]);
    (full, (full - reduced).abs())
}

fn gaussian_elimination(mut m: Vec<Vec<f64>>) -> Vec<f64> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            for k in col..=n {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| m[row][k] * x[k]).sum();
        x[row] = (m[row][n] - s) / m[row][row];
    }
    x
}

/// `int_0^inf r^beta |J_{1/2}(r)|^{p'} dr` for `d = 3` through
/// `J_{1/2}(r) = sqrt(2 / (pi r)) sin r`: arches `[k pi, (k+1) pi]`, the mean-value tail
/// `m X^{e+1} / (-(e+1))` with `m` the mean of `|sin|^{p'}`, and Richardson in the cut `X`.
pub fn elementary_kernel_integral_d3(p: f64, tol: impl Into<Tolerance>) -> Result<QuadResult> {
    if !radial_convergence_admissible(3, p) {
        return Err(Error::Divergence(format!(
            "the d = 3 kernel integral needs 1 < p < 3/2, got p = {p}"
        )));
    }
    let tol = tol.into();
    let tight = Tolerance { rel: (tol.rel / 100.0).max(1e-15), abs: tol.abs / 100.0 };
    let pp = p / (p - 1.0);
    let beta = (2.0 + 3.0 * (p - 2.0)) / (2.0 * (p - 1.0));
    let e = beta - 0.5 * pp;
    let coefficient = (2.0 / PI).powf(0.5 * pp);
    let f = |r: f64| coefficient * r.powf(e) * r.sin().abs().powf(pp);
    let mean = gamma(0.5 * (pp + 1.0))? / (PI.sqrt() * gamma(0.5 * pp + 1.0)?);
    let tail = |x: f64| coefficient * mean * x.powf(e + 1.0) / (-(e + 1.0));
    let levels = [1024usize, 2048, 4096];
    let mut running = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut converged = true;
    let mut estimates = Vec::new();
    for k in 0..*levels.last().unwrap() {
        let piece = tanh_sinh(&f, k as f64 * PI, (k + 1) as f64 * PI, tight);
        running += piece.value;
        error += piece.error_estimate;
        evaluations += piece.evaluations;
        converged &= piece.converged;
        if levels.contains(&(k + 1)) {
            let x = (k + 1) as f64 * PI;
            estimates.push((x, running + tail(x)));
        }
    }
    // Remainders after the mean-value tail scale like X^e, then X^{e-1}.
    let (x0, s0) = estimates[0];
    let (x1, s1) = estimates[1];
    let (x2, s2) = estimates[2];
    let eliminate = |(xa, sa): (f64, f64), (xb, sb): (f64, f64), power: f64| {
        let (wa, wb) = (xa.powf(power), xb.powf(power));
        (sb * wa - sa * wb) / (wa - wb)
    };
    let r01 = eliminate((x0, s0), (x1, s1), e);
    let r12 = eliminate((x1, s1), (x2, s2), e);
    let value = eliminate((x1, r01), (x2, r12), e - 1.0);
    let error_estimate = error + (value - r12).abs();
    Ok(QuadResult {
        value,
        error_estimate,
        evaluations,
        converged,
    })
}

/// One failing or erroring trial, with everything needed to rebuild the profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceFailure {
    pub index: Option<usize>,
    pub profile: Option<ProfileParams>,
    pub label: String,
    pub ratio: Option<f64>,
    pub allowed: Option<f64>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominancePoint {
    pub d: u32,
    pub p: f64,
    pub q: f64,
    pub trials: usize,
    pub max_ratio: Option<f64>,
    pub argmax: Option<usize>,
    pub k_rad: Option<f64>,
    /// `1 - max_ratio / k_rad`; negative when the bound is exceeded.
    pub margin: Option<f64>,
    /// `Z(F0) / K`, present when the extremal profile was injected.
    pub extremal_ratio: Option<f64>,
    pub failures: Vec<DominanceFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub spec: RandomRadialSpec,
    pub relative_tolerance: f64,
    pub inject_extremal: bool,
    pub points: Vec<DominancePoint>,
}

impl DominanceReport {
    pub fn passed(&self) -> bool {
        self.points.iter().all(|p| p.failures.is_empty())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominanceOptions {
    pub quadrature: Tolerance,
    /// `Z <= K (1 + relative)` plus ten times the quadrature error estimates.
    pub relative: f64,
    pub inject_extremal: bool,
}

impl Default for DominanceOptions {
    fn default() -> Self {
        Self {
            quadrature: Tolerance::new(1e-10, 1e-14).expect("valid"),
            relative: 1e-6,
            inject_extremal: false,
        }
    }
}

pub fn run_dominance_suite(
    grid: &[RestrictionParams],
    spec: &RandomRadialSpec,
    options: DominanceOptions,
) -> DominanceReport {
    let profiles = generate_profiles(spec);
    let points = grid.iter().map(|params| dominance_point(params, &profiles, options)).collect();
    DominanceReport {
        spec: *spec,
        relative_tolerance: options.relative,
        inject_extremal: options.inject_extremal,
        points,
    }
}

fn dominance_point(
    params: &RestrictionParams,
    profiles: &[GeneratedProfile],
    options: DominanceOptions,
) -> DominancePoint {
    let mut point = DominancePoint {
        d: params.d(),
        p: params.p(),
        q: params.q(),
        trials: 0,
        max_ratio: None,
        argmax: None,
        k_rad: None,
        margin: None,
        extremal_ratio: None,
        failures: Vec::new(),
    };
    let sharp = match sharp_radial_constant(params, options.quadrature) {
        Ok(s) => s,
        Err(e) => {
            point.failures.push(DominanceFailure {
                index: None,
                profile: None,
                label: "sharp constant".into(),
                ratio: None,
                allowed: None,
                reason: e.to_string(),
            });
            return point;
        }
    };
    let k = sharp.k_rad_first_principles;
    point.k_rad = Some(k);
    let allowed = |error: f64| k * (1.0 + options.relative) + 10.0 * (error + sharp.error_estimate);

    let outcomes: Vec<Result<(f64, f64)>> = profiles
        .par_iter()
        .map(|g| ratio_z(params, &g.profile, options.quadrature).map(|z| (z.value, z.error_estimate)))
        .collect();
    let mut best: Option<(usize, f64)> = None;
    for (g, outcome) in profiles.iter().zip(outcomes) {
        point.trials += 1;
        match outcome {
            Ok((ratio, error)) => {
                if best.is_none_or(|(_, b)| ratio > b) {
                    best = Some((g.index, ratio));
                }
                let limit = allowed(error);
                if ratio > limit {
                    point.failures.push(DominanceFailure {
                        index: Some(g.index),
                        profile: Some(g.params.clone()),
                        label: g.profile.label().to_string(),
                        ratio: Some(ratio),
                        allowed: Some(limit),
                        reason: "ratio exceeds the sharp constant".into(),
                    });
                }
            }
            Err(e) => point.failures.push(DominanceFailure {
                index: Some(g.index),
                profile: Some(g.params.clone()),
                label: g.profile.label().to_string(),
                ratio: None,
                allowed: None,
                reason: e.to_string(),
            }),
        }
    }
    let mut max_ratio = best.map(|b| b.1);
    point.argmax = best.map(|b| b.0);

    if options.inject_extremal {
        point.trials += 1;
        let outcome = extremal_profile(params, options.quadrature)
            .and_then(|ext| ratio_z(params, ext.profile(), options.quadrature));
        match outcome {
            Ok(z) => {
                point.extremal_ratio = Some(z.value / k);
                if max_ratio.is_none_or(|m| z.value > m) {
                    max_ratio = Some(z.value);
                    point.argmax = None;
                }
                let limit = allowed(z.error_estimate);
                if z.value > limit {
                    point.failures.push(DominanceFailure {
                        index: None,
                        profile: None,
                        label: "extremal".into(),
                        ratio: Some(z.value),
                        allowed: Some(limit),
                        reason: "extremal ratio exceeds the sharp constant".into(),
                    });
                }
            }
            Err(e) => point.failures.push(DominanceFailure {
                index: None,
                profile: None,
                label: "extremal".into(),
                ratio: None,
                allowed: None,
                reason: e.to_string(),
            }),
        }
    }
    point.max_ratio = max_ratio;
    point.margin = max_ratio.map(|m| 1.0 - m / k);
    point
}
