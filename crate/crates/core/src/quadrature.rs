//! Adaptive quadrature: finite intervals, semi-infinite decaying integrands and
//! improper integrals of Bessel type summed arch by arch.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::special_fns::{bessel_j, BesselOrder, BesselZeros};

/// Shared scalar function `f(r)`.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Requested accuracy: converged means `error <= max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub const DEFAULT_REL: f64 = 1e-9;
    pub const DEFAULT_ABS: f64 = 1e-14;

    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        if !(rel > 0.0 && rel.is_finite()) || !(abs >= 0.0 && abs.is_finite()) {
            return Err(Error::Domain(format!(
                "tolerances must be positive and finite, got rel={rel}, abs={abs}"
            )));
        }
        Ok(Self { rel, abs })
    }

    pub fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            rel: self.rel * factor,
            abs: self.abs * factor,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: Self::DEFAULT_REL,
            abs: Self::DEFAULT_ABS,
        }
    }
}

impl From<f64> for Tolerance {
    fn from(rel: f64) -> Self {
        Self {
            rel,
            abs: Self::DEFAULT_ABS,
        }
    }
}

/// Value of an integral together with its error estimate and cost.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    fn exact_zero() -> Self {
        Self {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 1,
            converged: true,
        }
    }

    /// Converts a non-converged result into an error.
    pub fn require_converged(self, what: &str) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence(format!(
                "{what}: estimate {} with error {} after {} evaluations",
                self.value, self.error_estimate, self.evaluations
            )))
        }
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_067_059_728,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Weights of the embedded 10-point Gauss rule on `XGK[1], XGK[3], ..., XGK[9]`.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const GK_POINTS: usize = 21;
const MAX_SUBDIVISIONS: usize = 4000;

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    splittable: bool,
}

/// One application of the 21-point Kronrod rule with its embedded Gauss rule.
/// Returns `(integral, error)` using the QUADPACK error rescaling.
fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = WGK[10] * f_center;
    let mut gauss = 0.0;
    let mut res_abs = kronrod.abs();
    let mut values = [0.0_f64; 20];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        values[2 * j] = f1;
        values[2 * j + 1] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((values[2 * j] - mean).abs() + (values[2 * j + 1] - mean).abs());
    }
    let abs_half = half.abs();
    let result = kronrod * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

fn make_segment<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let (value, error) = gauss_kronrod_21(f, a, b);
    let mid = 0.5 * (a + b);
    let splittable = mid > a && mid < b && (b - a) > 1e3 * f64::EPSILON * a.abs().max(b.abs());
    Segment {
        a,
        b,
        value,
        error,
        splittable,
    }
}

/// Adaptive Gauss-Kronrod integration of `f` over `[a, b]`, bisecting the segment with
/// the largest error estimate until the summed estimate meets the tolerance.
///
/// Integrable power singularities at either endpoint are resolved by repeated bisection;
/// the rule never evaluates the endpoints themselves.
pub fn integrate_finite<F>(f: F, a: f64, b: f64, tol: impl Into<Tolerance>) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    let tol = tol.into();
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("finite limits required, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadResult::exact_zero());
    }
    if a > b {
        return Err(Error::Domain(format!("integration requires a < b, got [{a}, {b}]")));
    }
    let mut segments = vec![make_segment(&f, a, b)];
    let mut evaluations = GK_POINTS;
    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if !total.is_finite() || !error.is_finite() {
            return Err(Error::Divergence(format!(
                "integrand is not finite on [{a}, {b}]"
            )));
        }
        let done = error <= tol.target(total);
        let worst = segments
            .iter()
            .enumerate()
            .filter(|(_, s)| s.splittable)
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i);
        let exhausted = worst.is_none() || segments.len() >= MAX_SUBDIVISIONS;
        if done || exhausted {
            return Ok(QuadResult {
                value: total,
                error_estimate: error,
                evaluations,
                converged: done,
            });
        }
        let seg = segments.swap_remove(worst.unwrap());
        let mid = 0.5 * (seg.a + seg.b);
        segments.push(make_segment(&f, seg.a, mid));
        segments.push(make_segment(&f, mid, seg.b));
        evaluations += 2 * GK_POINTS;
    }
}

/// `int_0^inf f(r) dr` for `f` decaying faster than `r^{-1-delta}`, through the map
/// `r = t / (1 - t)` onto `(0, 1)`.
///
/// Returns a divergence error when `r |f(r)|` does not decrease along `r = 10^3 .. 10^9`,
/// the signature of an integrand whose partial integrals are not Cauchy.
pub fn integrate_semi_infinite_decaying<F>(f: F, tol: impl Into<Tolerance>) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    let tol = tol.into();
    let tail: Vec<f64> = (3..=9)
        .map(|e| {
            let r = 10f64.powi(e);
            r * f(r).abs()
        })
        .collect();
    if tail.iter().any(|v| !v.is_finite()) {
        return Err(Error::Divergence("integrand is not finite at large r".into()));
    }
    let last = *tail.last().unwrap();
    if last > tol.abs && last >= 0.5 * tail[1] {
        return Err(Error::Divergence(format!(
            "r|f(r)| does not decay (r|f(r)| = {last:e} at r = 1e9)"
        )));
    }
    let mapped = |t: f64| {
        let s = 1.0 - t;
        let r = t / s;
        let v = f(r);
        if v == 0.0 {
            0.0
        } else {
            v / (s * s)
        }
    };
    let mut out = integrate_finite(mapped, 0.0, 1.0, tol)?;
    out.evaluations += tail.len();
    Ok(out)
}

/// How the partial sums over consecutive pieces of an improper integral are extrapolated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailSummation {
    /// Sign-alternating pieces, accelerated with Wynn's epsilon algorithm.
    WynnEpsilon,
    /// Sign-definite pieces whose integrand envelope decays like `r^-decay`, `decay > 1`.
    /// The remainder after `x` has an expansion in `x^{1-decay-j}`, `j = 0, 1, ...`, which
    /// is eliminated by interpolation at several truncation points.
    AlgebraicTail { decay: f64 },
    /// `AlgebraicTail` if the pieces turn out sign-definite, `WynnEpsilon` otherwise.
    Auto { decay: f64 },
}

const MIN_EPSILON_PIECES: usize = 12;
const MAX_EPSILON_PIECES: usize = 2000;
const EPSILON_WINDOW: usize = 40;
const MIN_ALGEBRAIC_PIECES: usize = 64;
const MAX_ALGEBRAIC_PIECES: usize = 32_768;

/// Running sum over the pieces `[x_k, x_{k+1}]` of `[x_0, inf)`.
struct PieceSums<'a, F, I> {
    f: &'a F,
    breakpoints: I,
    left: f64,
    piece_tol: Tolerance,
    /// `ends[n]`, `sums[n]`: right end and partial sum after `n + 1` pieces.
    ends: Vec<f64>,
    sums: Vec<f64>,
    pieces: Vec<f64>,
    error: f64,
    evaluations: usize,
    all_converged: bool,
}

impl<'a, F, I> PieceSums<'a, F, I>
where
    F: Fn(f64) -> f64,
    I: Iterator<Item = f64>,
{
    fn new(f: &'a F, start: f64, breakpoints: I, piece_tol: Tolerance) -> Self {
        Self {
            f,
            breakpoints,
            left: start,
            piece_tol,
            ends: Vec::new(),
            sums: Vec::new(),
            pieces: Vec::new(),
            error: 0.0,
            evaluations: 0,
            all_converged: true,
        }
    }

    fn extend_to(&mut self, n: usize) -> Result<()> {
        while self.sums.len() < n {
            let right = match self.breakpoints.next() {
                Some(r) => r,
                None => return Err(Error::Domain("breakpoint sequence ended".into())),
            };
            if right <= self.left {
                continue;
            }
            let piece = integrate_finite(self.f, self.left, right, self.piece_tol)?;
            self.error += piece.error_estimate;
            self.evaluations += piece.evaluations;
            self.all_converged &= piece.converged;
            let previous = self.sums.last().copied().unwrap_or(0.0);
            self.sums.push(previous + piece.value);
            self.pieces.push(piece.value);
            self.ends.push(right);
            self.left = right;
        }
        Ok(())
    }

    fn sign_definite(&self) -> bool {
        let tail = &self.pieces[self.pieces.len().min(3)..];
        tail.iter().all(|&v| v >= 0.0) || tail.iter().all(|&v| v <= 0.0)
    }
}

/// `int_{start}^inf f` split at an increasing, unbounded sequence of breakpoints with the
/// partial sums extrapolated according to `summation`.
pub fn integrate_by_pieces<F, I>(
    f: F,
    start: f64,
    breakpoints: I,
    summation: TailSummation,
    tol: impl Into<Tolerance>,
) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
    I: Iterator<Item = f64>,
{
    let tol = tol.into();
    let piece_tol = Tolerance {
        rel: (1e-2 * tol.rel).max(1e-13),
        abs: 1e-3 * tol.abs,
    };
    let mut sums = PieceSums::new(&f, start, breakpoints, piece_tol);
    let summation = match summation {
        TailSummation::Auto { decay } => {
            sums.extend_to(MIN_EPSILON_PIECES)?;
            if sums.sign_definite() {
                TailSummation::AlgebraicTail { decay }
            } else {
                TailSummation::WynnEpsilon
            }
        }
        other => other,
    };
    match summation {
        TailSummation::WynnEpsilon => sum_with_epsilon(&mut sums, tol),
        TailSummation::AlgebraicTail { decay } => {
            if !(decay > 1.0) {
                return Err(Error::Divergence(format!(
                    "algebraic tail requires envelope decay exponent > 1, got {decay}"
                )));
            }
            sum_with_algebraic_tail(&mut sums, decay, tol)
        }
        TailSummation::Auto { .. } => unreachable!(),
    }
}

fn sum_with_epsilon<F, I>(sums: &mut PieceSums<'_, F, I>, tol: Tolerance) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
    I: Iterator<Item = f64>,
{
    let mut history: Vec<f64> = Vec::new();
    let mut n = MIN_EPSILON_PIECES;
    loop {
        sums.extend_to(n)?;
        let window = &sums.sums[n.saturating_sub(EPSILON_WINDOW)..n];
        let (estimate, table_error) = wynn_epsilon(window);
        history.push(estimate);
        let k = history.len();
        if k >= 3 {
            let spread = (estimate - history[k - 2])
                .abs()
                .max((estimate - history[k - 3]).abs());
            let error = spread.max(table_error.min(spread * 10.0)) + sums.error;
            if spread + sums.error <= tol.target(estimate) {
                return Ok(QuadResult {
                    value: estimate,
                    error_estimate: spread + sums.error,
                    evaluations: sums.evaluations,
                    converged: sums.all_converged,
                });
            }
            if n >= MAX_EPSILON_PIECES {
                return Ok(QuadResult {
                    value: estimate,
                    error_estimate: error,
                    evaluations: sums.evaluations,
                    converged: false,
                });
            }
        }
        n += 1;
    }
}

/// Wynn's epsilon algorithm on a sequence of partial sums.
///
/// Returns the deepest even-column entry reached and the distance to the entry two
/// columns to the left, which serves as its error estimate.
pub fn wynn_epsilon(partial_sums: &[f64]) -> (f64, f64) {
    let n = partial_sums.len();
    match n {
        0 => return (0.0, f64::INFINITY),
        1 => return (partial_sums[0], f64::INFINITY),
        _ => {}
    }
    let mut previous = vec![0.0_f64; n + 1];
    let mut current = partial_sums.to_vec();
    let mut best = *partial_sums.last().unwrap();
    let mut best_error = (partial_sums[n - 1] - partial_sums[n - 2]).abs();
    let mut last_even = best;
    let mut column = 0;
    while current.len() >= 2 {
        let mut next = Vec::with_capacity(current.len() - 1);
        for j in 0..current.len() - 1 {
            let diff = current[j + 1] - current[j];
            if diff == 0.0 || !diff.is_finite() {
                return (best, best_error);
            }
            next.push(previous[j + 1] + 1.0 / diff);
        }
        column += 1;
        previous = current;
        current = next;
        if column % 2 == 0 {
            let candidate = *current.last().unwrap();
            if !candidate.is_finite() {
                break;
            }
            let error = (candidate - last_even).abs();
            if error > best_error && column > 2 {
                break;
            }
            best = candidate;
            best_error = error;
            last_even = candidate;
        }
    }
    (best, best_error)
}

/// Solves `A x = b` in place by Gaussian elimination with partial pivoting.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col] == 0.0 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

/// Limit of `S(x) = S_inf - sum_{j<terms} c_j x^{exponent - j}` interpolated through the
/// partial sums at `terms + 1` truncation points among the first `n` pieces.
fn algebraic_limit(ends: &[f64], sums: &[f64], n: usize, exponent: f64, terms: usize) -> Option<f64> {
    let points: Vec<usize> = (0..=terms)
        .map(|i| ((n * (i + 1)).div_ceil(terms + 1)).max(1) - 1)
        .collect();
    if points.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let scale = ends[n - 1];
    let matrix: Vec<Vec<f64>> = points
        .iter()
        .map(|&i| {
            let u = ends[i] / scale;
            let mut row = vec![1.0];
            row.extend((0..terms).map(|j| -u.powf(exponent - j as f64)));
            row
        })
        .collect();
    let rhs: Vec<f64> = points.iter().map(|&i| sums[i]).collect();
    solve_dense(matrix, rhs).map(|x| x[0])
}

fn sum_with_algebraic_tail<F, I>(
    sums: &mut PieceSums<'_, F, I>,
    decay: f64,
    tol: Tolerance,
) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
    I: Iterator<Item = f64>,
{
    const TERMS: usize = 6;
    let exponent = 1.0 - decay;
    let mut n = MIN_ALGEBRAIC_PIECES;
    loop {
        sums.extend_to(n)?;
        let direct = sums.sums[n - 1];
        let estimate = |count: usize, terms: usize| {
            algebraic_limit(&sums.ends, &sums.sums, count, exponent, terms).unwrap_or(f64::NAN)
        };
        let best = estimate(n, TERMS);
        let lower_order = estimate(n, TERMS - 1);
        let coarser = estimate(n / 2, TERMS);
        let spread = (best - lower_order).abs().max((best - coarser).abs());
        let error = spread + sums.error;
        let positive = sums.pieces.iter().skip(3).all(|&v| v >= 0.0);
        // For positive pieces the limit lies above every partial sum.
        let consistent = !positive || best >= direct - tol.target(best);
        if best.is_finite() && consistent && error <= tol.target(best) {
            return Ok(QuadResult {
                value: best,
                error_estimate: error,
                evaluations: sums.evaluations,
                converged: sums.all_converged,
            });
        }
        if n >= MAX_ALGEBRAIC_PIECES {
            let value = if best.is_finite() { best } else { direct };
            return Ok(QuadResult {
                value,
                error_estimate: if error.is_finite() { error } else { f64::INFINITY },
                evaluations: sums.evaluations,
                converged: false,
            });
        }
        n *= 2;
    }
}

/// Integrand `g(r) * J_nu(r)^s` (or `|J_nu(r)|^s`) on `(0, inf)`.
#[derive(Clone)]
pub struct OscillatoryIntegrand {
    order: BesselOrder,
    envelope: ScalarFn,
    power: f64,
    absolute: bool,
    /// `g(r) ~ r^origin_exponent` as `r -> 0`.
    origin_exponent: f64,
    /// `g(r) r^{-s/2} ~ r^{-tail_decay}` as `r -> inf`.
    tail_decay: f64,
}

impl std::fmt::Debug for OscillatoryIntegrand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OscillatoryIntegrand")
            .field("order", &self.order)
            .field("power", &self.power)
            .field("absolute", &self.absolute)
            .field("origin_exponent", &self.origin_exponent)
            .field("tail_decay", &self.tail_decay)
            .finish()
    }
}

impl OscillatoryIntegrand {
    /// `g(r) |J_nu(r)|^power` with a real power `>= 1`.
    pub fn absolute(
        order: BesselOrder,
        envelope: ScalarFn,
        power: f64,
        origin_exponent: f64,
        tail_decay: f64,
    ) -> Result<Self> {
        if !(power >= 1.0 && power.is_finite()) {
            return Err(Error::Domain(format!("Bessel power must be >= 1, got {power}")));
        }
        Ok(Self {
            order,
            envelope,
            power,
            absolute: true,
            origin_exponent,
            tail_decay,
        })
    }

    /// `g(r) J_nu(r)^power` with an integer power `>= 1`.
    pub fn signed(
        order: BesselOrder,
        envelope: ScalarFn,
        power: u32,
        origin_exponent: f64,
        tail_decay: f64,
    ) -> Result<Self> {
        if power == 0 {
            return Err(Error::Domain("Bessel power must be >= 1".into()));
        }
        Ok(Self {
            order,
            envelope,
            power: power as f64,
            absolute: false,
            origin_exponent,
            tail_decay,
        })
    }

    /// `r^beta |J_nu(r)|^power`, the kernel integrand of the sharp radial constant.
    pub fn power_weighted(order: BesselOrder, beta: f64, power: f64) -> Result<Self> {
        let envelope: ScalarFn = Arc::new(move |r: f64| r.powf(beta));
        Self::absolute(order, envelope, power, beta, 0.5 * power - beta)
    }

    pub fn order(&self) -> BesselOrder {
        self.order
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn tail_decay(&self) -> f64 {
        self.tail_decay
    }

    fn oscillation_cancels(&self) -> bool {
        !self.absolute && (self.power as u32) % 2 == 1
    }

    /// Integrability at both ends; the error names the violated exponent condition.
    pub fn check_integrable(&self) -> Result<()> {
        let at_origin = self.origin_exponent + self.order.nu() * self.power;
        if !(at_origin > -1.0) {
            return Err(Error::Divergence(format!(
                "integrand behaves like r^{at_origin} at the origin; the exponent must exceed -1"
            )));
        }
        let needed = if self.oscillation_cancels() { 0.0 } else { 1.0 };
        if !(self.tail_decay > needed) {
            return Err(Error::Divergence(format!(
                "integrand envelope decays like r^-{} at infinity; the decay exponent must exceed {}",
                self.tail_decay, needed
            )));
        }
        Ok(())
    }

    pub fn eval(&self, r: f64) -> f64 {
        let g = (self.envelope)(r);
        if g == 0.0 {
            return 0.0;
        }
        let j = bessel_j(self.order, r);
        let value = if self.absolute {
            j.abs().powf(self.power)
        } else {
            j.powi(self.power as i32)
        };
        g * value
    }
}

/// `int_0^inf g(r) |J_nu(r)|^s dr` (or the signed variant) summed over the arches
/// `[j_{nu,k}, j_{nu,k+1}]`.
///
/// Sign-alternating arch sequences go through Wynn's epsilon algorithm; sign-definite ones
/// through the algebraic-tail interpolation driven by the envelope decay exponent.
pub fn integrate_oscillatory_bessel(
    spec: &OscillatoryIntegrand,
    tol: impl Into<Tolerance>,
) -> Result<QuadResult> {
    spec.check_integrable()?;
    let summation = if spec.oscillation_cancels() {
        TailSummation::WynnEpsilon
    } else {
        TailSummation::AlgebraicTail {
            decay: spec.tail_decay,
        }
    };
    integrate_by_pieces(
        |r| spec.eval(r),
        0.0,
        BesselZeros::new(spec.order),
        summation,
        tol,
    )
}

/// Evenly spaced breakpoints `start + k * step`, `k = 1, 2, ...`.
pub fn uniform_breakpoints(start: f64, step: f64) -> impl Iterator<Item = f64> {
    (1..).map(move |k| start + k as f64 * step)
}

/// Zeros of `J_nu(s r)` in `r`: `j_{nu,k} / s`.
pub fn scaled_bessel_zeros(order: BesselOrder, s: f64) -> impl Iterator<Item = f64> {
    BesselZeros::new(order).map(move |z| z / s)
}
