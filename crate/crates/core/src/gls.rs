//! Grand Lebesgue Space norms `||f||_{G psi} = sup_p ||f||_p / psi(p)` and the transfer of
//! restriction bounds into them through `zeta(q) = inf_{p in D} psi(p) K(p, q)`.
//!
//! Suprema and infima over `p` are taken over finite grids. A finer grid can only raise
//! the `G psi` norm and lower `zeta`.

use std::io::Read;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::Tolerance;
use crate::radial_fourier::{radial_hat, radial_lp_norm, RadialProfile};
use crate::restriction::{
    gaussian_lower_bound_optimized, radial_convergence_admissible, sharp_radial_constant,
    tomas_stein_admissible, RestrictionParams,
};
use crate::special_fns::RadialKernel;

/// A weight `psi` on `(a, b)`, sampled and interpolated piecewise-linearly between samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiWeight {
    a: f64,
    b: f64,
    samples: Vec<(f64, f64)>,
}

#[derive(Deserialize)]
struct PsiRow {
    p: f64,
    psi: f64,
}

impl PsiWeight {
    /// `b` may be `f64::INFINITY`.
    pub fn new(a: f64, b: f64, samples: Vec<(f64, f64)>) -> Result<Self> {
        if !(a >= 1.0 && a.is_finite()) {
            return Err(Error::Domain(format!("psi interval start must be >= 1, got {a}")));
        }
        if !(b > a) {
            return Err(Error::Domain(format!("psi interval ({a}, {b}) is empty")));
        }
        if samples.is_empty() {
            return Err(Error::Domain("psi weight needs at least one sample".into()));
        }
        for (i, &(p, psi)) in samples.iter().enumerate() {
            if !(p > a && p < b) {
                return Err(Error::Domain(format!("psi sample at p = {p} lies outside ({a}, {b})")));
            }
            if !(psi > 0.0 && psi.is_finite()) {
                return Err(Error::Domain(format!(
                    "psi must be positive and finite, got psi({p}) = {psi}"
                )));
            }
            if i > 0 && !(p > samples[i - 1].0) {
                return Err(Error::Domain(format!(
                    "psi abscissae must be strictly increasing: {} then {p}",
                    samples[i - 1].0
                )));
            }
        }
        Ok(Self { a, b, samples })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(a: f64, b: f64, grid: &[f64], f: F) -> Result<Self> {
        Self::new(a, b, grid.iter().map(|&p| (p, f(p))).collect())
    }

    pub fn constant(a: f64, b: f64, grid: &[f64], c: f64) -> Result<Self> {
        Self::from_fn(a, b, grid, |_| c)
    }

    /// Reads a CSV with header `p,psi`.
    pub fn from_csv_reader<R: Read>(a: f64, b: f64, reader: R) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = csv.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "p" || &headers[1] != "psi" {
            return Err(Error::Parse(format!(
                "psi CSV header must be 'p,psi', got '{}'",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut samples = Vec::new();
        for row in csv.deserialize() {
            let row: PsiRow = row?;
            samples.push((row.p, row.psi));
        }
        Self::new(a, b, samples)
    }

    pub fn from_csv_path(a: f64, b: f64, path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path.as_ref()).map_err(|e| {
            Error::Io(format!("cannot open psi weight file {}: {e}", path.as_ref().display()))
        })?;
        Self::from_csv_reader(a, b, file)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn abscissae(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.0).collect()
    }

    /// Smallest sampled value; positive by construction.
    pub fn infimum(&self) -> f64 {
        self.samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min)
    }

    /// `psi(p)` by linear interpolation; `None` outside the sampled range.
    pub fn eval(&self, p: f64) -> Option<f64> {
        let first = self.samples.first()?.0;
        let last = self.samples.last()?.0;
        if !(p >= first && p <= last) {
            return None;
        }
        let i = self.samples.partition_point(|s| s.0 < p);
        let (p1, v1) = self.samples[i];
        if p1 == p || i == 0 {
            return Some(v1);
        }
        let (p0, v0) = self.samples[i - 1];
        Some(v0 + (v1 - v0) * (p - p0) / (p1 - p0))
    }

    fn eval_required(&self, p: f64) -> Result<f64> {
        self.eval(p).ok_or_else(|| {
            Error::Domain(format!(
                "psi is sampled on [{}, {}]; evaluating at p = {p} would need extrapolation",
                self.samples[0].0,
                self.samples[self.samples.len() - 1].0
            ))
        })
    }

    /// `c psi`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.a, self.b, self.samples.iter().map(|&(p, v)| (p, c * v)).collect())
    }
}

/// `sup_p ||f||_p / psi(p)` over the samples lying in `(a, b)`.
pub fn gls_norm(norm_samples: &[(f64, f64)], psi: &PsiWeight) -> Result<f64> {
    let mut best: Option<f64> = None;
    for &(p, norm) in norm_samples {
        if !(p > psi.a && p < psi.b) {
            continue;
        }
        if !(norm >= 0.0) {
            return Err(Error::Domain(format!("norm samples must be >= 0, got {norm} at p = {p}")));
        }
        let ratio = norm / psi.eval_required(p)?;
        best = Some(best.map_or(ratio, |b| b.max(ratio)));
    }
    best.ok_or_else(|| {
        Error::Domain(format!(
            "no norm sample lies in the psi interval ({}, {})",
            psi.a, psi.b
        ))
    })
}

/// Which admissibility conditions a cut-set point must pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutFilter {
    /// Tomas-Stein necessary conditions for some `q >= 1`.
    TomasStein,
    /// `1 < p < 2d/(d+1)`.
    RadialConvergence,
    /// Both of the above.
    Combined,
}

impl CutFilter {
    fn describe(&self) -> &'static str {
        match self {
            CutFilter::TomasStein => "Tomas-Stein condition 1 <= p <= (2d+2)/(d+3)",
            CutFilter::RadialConvergence => "convergence window 1 < p < 2d/(d+1)",
            CutFilter::Combined => {
                "combined filter (Tomas-Stein p <= (2d+2)/(d+3) and convergence window 1 < p < 2d/(d+1))"
            }
        }
    }

    fn accepts(&self, d: u32, p: f64) -> bool {
        let tomas_stein = || {
            // q = 1 is the most permissive choice for the q condition.
            RestrictionParams::new(d, p, 1.0)
                .map(|pr| tomas_stein_admissible(&pr))
                .unwrap_or(false)
        };
        match self {
            CutFilter::TomasStein => tomas_stein(),
            CutFilter::RadialConvergence => radial_convergence_admissible(d, p),
            CutFilter::Combined => tomas_stein() && radial_convergence_admissible(d, p),
        }
    }
}

/// The grid points of the cut set `D` under a filter.
pub fn cut_set_with(d: u32, p_grid: &[f64], filter: CutFilter) -> Vec<f64> {
    p_grid.iter().copied().filter(|&p| filter.accepts(d, p)).collect()
}

/// The cut set under the combined filter used for sharp constants.
pub fn cut_set(d: u32, p_grid: &[f64]) -> Vec<f64> {
    cut_set_with(d, p_grid, CutFilter::Combined)
}

/// Where the constants `K(p, q)` come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstantSource {
    /// The sharp radial constant; the only source used for transfer checks.
    RadialSharp,
    /// The optimised Gaussian lower bound; for reporting.
    GaussianLower,
}

impl ConstantSource {
    pub fn filter(&self) -> CutFilter {
        match self {
            ConstantSource::RadialSharp => CutFilter::Combined,
            ConstantSource::GaussianLower => CutFilter::TomasStein,
        }
    }
}

/// `zeta(q)` on a `q` grid, with the table it was minimised over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaWeight {
    pub d: u32,
    pub source: ConstantSource,
    /// `(q, zeta(q))`.
    pub samples: Vec<(f64, f64)>,
    /// The cut-set grid the infimum ran over.
    pub p_grid: Vec<f64>,
    pub psi_values: Vec<f64>,
    /// `constants[i][j] = K(p_grid[j], q_i)`.
    pub constants: Vec<Vec<f64>>,
    /// `p` attaining the minimum for each `q`.
    pub argmin: Vec<f64>,
}

impl ZetaWeight {
    pub fn value_at(&self, q: f64) -> Option<f64> {
        self.samples.iter().find(|s| s.0 == q).map(|s| s.1)
    }
}

/// `zeta(q) = min_p psi(p) K(p, q)` with `p` running over the cut set of the psi samples.
pub fn zeta_from_psi(
    psi: &PsiWeight,
    q_grid: &[f64],
    d: u32,
    source: ConstantSource,
    tol: impl Into<Tolerance>,
) -> Result<ZetaWeight> {
    zeta_from_psi_on(psi, &psi.abscissae(), q_grid, d, source, tol)
}

/// As [`zeta_from_psi`] with an explicit `p` grid.
pub fn zeta_from_psi_on(
    psi: &PsiWeight,
    p_grid: &[f64],
    q_grid: &[f64],
    d: u32,
    source: ConstantSource,
    tol: impl Into<Tolerance>,
) -> Result<ZetaWeight> {
    let tol = tol.into();
    if q_grid.is_empty() {
        return Err(Error::Domain("q grid is empty".into()));
    }
    let filter = source.filter();
    let inside: Vec<f64> = p_grid
        .iter()
        .copied()
        .filter(|&p| p > psi.a && p < psi.b)
        .collect();
    let cut = cut_set_with(d, &inside, filter);
    if cut.is_empty() {
        return Err(Error::Domain(format!(
            "the cut set is empty: no p in the grid inside ({}, {}) passes the {} for d = {d}",
            psi.a,
            psi.b,
            filter.describe()
        )));
    }
    let psi_values = cut.iter().map(|&p| psi.eval_required(p)).collect::<Result<Vec<_>>>()?;

    let by_p: Vec<Vec<f64>> = cut
        .par_iter()
        .map(|&p| constants_over_q(d, p, q_grid, source, tol))
        .collect::<Result<Vec<_>>>()?;

    let mut samples = Vec::with_capacity(q_grid.len());
    let mut constants = Vec::with_capacity(q_grid.len());
    let mut argmin = Vec::with_capacity(q_grid.len());
    for (i, &q) in q_grid.iter().enumerate() {
        let row: Vec<f64> = by_p.iter().map(|ks| ks[i]).collect();
        let (j, zeta) = row
            .iter()
            .zip(&psi_values)
            .map(|(k, w)| k * w)
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (j, v)| if v < acc.1 { (j, v) } else { acc });
        samples.push((q, zeta));
        argmin.push(cut[j]);
        constants.push(row);
    }
    Ok(ZetaWeight {
        d,
        source,
        samples,
        p_grid: cut,
        psi_values,
        constants,
        argmin,
    })
}

fn constants_over_q(
    d: u32,
    p: f64,
    q_grid: &[f64],
    source: ConstantSource,
    tol: Tolerance,
) -> Result<Vec<f64>> {
    match source {
        ConstantSource::RadialSharp => {
            let base = sharp_radial_constant(&RestrictionParams::new(d, p, 1.0)?, tol)?;
            q_grid
                .iter()
                .map(|&q| Ok(base.rescaled_to_q(q)?.k_rad_first_principles))
                .collect()
        }
        ConstantSource::GaussianLower => q_grid
            .iter()
            .map(|&q| Ok(gaussian_lower_bound_optimized(&RestrictionParams::new(d, p, q)?).bound))
            .collect(),
    }
}

/// Both sides of `||f^||_{G zeta, S^{d-1}} <= ||f||_{G psi}` on the grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub d: u32,
    pub left: f64,
    pub right: f64,
    /// `left / right`, zero when both vanish.
    pub ratio: f64,
    pub holds: bool,
    pub slack: f64,
    /// `(q, ||f^||_{L_q(S^{d-1})})`.
    pub sphere_norms: Vec<(f64, f64)>,
    /// `(p, ||f||_p)`.
    pub lp_norms: Vec<(f64, f64)>,
    pub zeta: ZetaWeight,
}

/// Relative slack for the transfer check before quadrature errors are added.
pub const TRANSFER_SLACK: f64 = 1e-8;

pub fn verify_transfer(
    psi: &PsiWeight,
    profile: &RadialProfile,
    d: u32,
    q_grid: &[f64],
    tol: impl Into<Tolerance>,
) -> Result<TransferReport> {
    let tol = tol.into();
    let kernel = RadialKernel::new(d)?;
    let zeta = zeta_from_psi(psi, q_grid, d, ConstantSource::RadialSharp, tol)?;

    let transform = radial_hat(&kernel, profile, 1.0, tol)?;
    let area = kernel.sphere_area();
    let g = transform.value.abs();
    let sphere_norms: Vec<(f64, f64)> =
        q_grid.iter().map(|&q| (q, area.powf(1.0 / q) * g)).collect();
    let left = sphere_norms
        .iter()
        .zip(&zeta.samples)
        .map(|(&(_, n), &(_, z))| n / z)
        .fold(0.0, f64::max);

    let norms: Vec<(f64, f64, f64)> = psi
        .abscissae()
        .par_iter()
        .map(|&p| {
            radial_lp_norm(&kernel, profile, p, tol).map(|n| (p, n.value, n.error_estimate))
        })
        .collect::<Result<Vec<_>>>()?;
    let lp_norms: Vec<(f64, f64)> = norms.iter().map(|n| (n.0, n.1)).collect();
    let right = gls_norm(&lp_norms, psi)?;

    let relative_quad_error = if g > 0.0 { transform.quad.error_estimate / g } else { 0.0 }
        + norms
            .iter()
            .filter(|n| n.1 > 0.0)
            .map(|n| n.2 / n.1)
            .fold(0.0, f64::max);
    let slack = TRANSFER_SLACK + 10.0 * relative_quad_error;
    let holds = left <= right * (1.0 + slack) + transform.quad.error_estimate;
    let ratio = if right > 0.0 {
        left / right
    } else if left == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(TransferReport {
        d,
        left,
        right,
        ratio,
        holds,
        slack,
        sphere_norms,
        lp_norms,
        zeta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn psi_validation_and_interpolation() {
        assert!(PsiWeight::new(0.5, 2.0, vec![(1.5, 1.0)]).is_err());
        assert!(PsiWeight::new(1.0, 2.0, vec![(2.5, 1.0)]).is_err());
        assert!(PsiWeight::new(1.0, 2.0, vec![(1.5, 1.0), (1.2, 1.0)]).is_err());
        assert!(PsiWeight::new(1.0, 2.0, vec![(1.5, 0.0)]).is_err());
        let psi = PsiWeight::new(1.0, f64::INFINITY, vec![(1.5, 1.0), (2.5, 3.0)]).unwrap();
        assert_eq!(psi.eval(1.5), Some(1.0));
        assert_eq!(psi.eval(2.0), Some(2.0));
        assert_eq!(psi.eval(2.5), Some(3.0));
        assert_eq!(psi.eval(1.4), None);
        assert_eq!(psi.eval(2.6), None);
        assert_eq!(psi.infimum(), 1.0);
    }

    #[test]
    fn psi_from_csv() {
        let text = "p,psi\n1.1, 2.0\n1.2,1.5\n";
        let psi = PsiWeight::from_csv_reader(1.0, 1.5, text.as_bytes()).unwrap();
        assert_eq!(psi.samples(), &[(1.1, 2.0), (1.2, 1.5)]);
        assert!(PsiWeight::from_csv_reader(1.0, 1.5, "x,y\n1.1,2\n".as_bytes()).is_err());
        assert!(PsiWeight::from_csv_reader(1.0, 1.5, "p,psi\n1.1,abc\n".as_bytes()).is_err());
    }

    #[test]
    fn gls_norm_examples() {
        let ps = grid(1.2, 2.8, 9);
        let psi = PsiWeight::constant(1.0, 3.0, &ps, 1.0).unwrap();
        let ones: Vec<(f64, f64)> = ps.iter().map(|&p| (p, 1.0)).collect();
        assert_eq!(gls_norm(&ones, &psi).unwrap(), 1.0);
        let doubled: Vec<(f64, f64)> = ones.iter().map(|&(p, v)| (p, 2.0 * v)).collect();
        assert_eq!(gls_norm(&doubled, &psi).unwrap(), 2.0);
        assert!(gls_norm(&[(3.5, 1.0)], &psi).is_err());
        assert!(gls_norm(&[(1.1, 1.0)], &psi).is_err());
    }

    #[test]
    fn cut_set_examples() {
        assert_eq!(cut_set(3, &[1.1, 1.2, 1.3]), vec![1.1, 1.2, 1.3]);
        assert!(cut_set(3, &[1.4]).is_empty());
        assert_eq!(cut_set_with(2, &[1.25], CutFilter::RadialConvergence), vec![1.25]);
        assert!(cut_set_with(2, &[1.25], CutFilter::TomasStein).is_empty());
        assert!(cut_set(2, &[1.25]).is_empty());
        assert_eq!(cut_set_with(3, &[1.0, 4.0 / 3.0], CutFilter::TomasStein), vec![1.0, 4.0 / 3.0]);
        assert_eq!(cut_set(3, &[1.0, 4.0 / 3.0]), vec![4.0 / 3.0]);
    }

    #[test]
    fn zeta_examples() {
        let ps = [1.05, 1.15, 1.25];
        let one = PsiWeight::constant(1.0, 4.0 / 3.0, &ps, 1.0).unwrap();
        let z1 = zeta_from_psi(&one, &[1.0, 2.0], 3, ConstantSource::RadialSharp, 1e-10).unwrap();
        for (i, &(_, z)) in z1.samples.iter().enumerate() {
            let min = z1.constants[i].iter().copied().fold(f64::INFINITY, f64::min);
            assert_eq!(z, min);
            for (j, k) in z1.constants[i].iter().enumerate() {
                assert!(z <= z1.psi_values[j] * k);
            }
        }
        let three = one.scaled(3.0).unwrap();
        let z3 = zeta_from_psi(&three, &[1.0, 2.0], 3, ConstantSource::RadialSharp, 1e-10).unwrap();
        for (a, b) in z1.samples.iter().zip(&z3.samples) {
            assert!((b.1 - 3.0 * a.1).abs() <= 1e-14 * b.1);
        }
    }

    #[test]
    fn zeta_with_empty_cut_names_the_filter() {
        let psi = PsiWeight::constant(1.0, 3.0, &[1.4, 1.5], 1.0).unwrap();
        let err = zeta_from_psi(&psi, &[2.0], 3, ConstantSource::RadialSharp, 1e-9).unwrap_err();
        assert!(err.to_string().contains("combined filter"), "{err}");
    }

    #[test]
    fn gaussian_source_uses_tomas_stein_cut() {
        let psi = PsiWeight::constant(1.0, 3.0, &[1.1, 1.3], 1.0).unwrap();
        let z = zeta_from_psi(&psi, &[2.0], 3, ConstantSource::GaussianLower, 1e-9).unwrap();
        assert_eq!(z.p_grid, vec![1.1, 1.3]);
        assert!(z.samples[0].1 > 0.0);
    }

    #[test]
    fn transfer_for_zero_and_gaussian() {
        let ps = [1.05, 1.1, 1.2, 1.3];
        let kernel = RadialKernel::new(3).unwrap();
        let h = RadialProfile::gaussian(1.0, 3).unwrap();
        let psi = PsiWeight::from_fn(1.0, 4.0 / 3.0, &ps, |p| {
            radial_lp_norm(&kernel, &h, p, 1e-11).unwrap().value
        })
        .unwrap();
        let report = verify_transfer(&psi, &h, 3, &[1.0, 2.0], 1e-10).unwrap();
        assert!(report.holds);
        assert!((report.right - 1.0).abs() < 1e-9);
        assert!(report.left <= 1.0 + 1e-8);

        let zero = verify_transfer(&psi, &RadialProfile::zero(), 3, &[2.0], 1e-10).unwrap();
        assert_eq!((zero.left, zero.right, zero.ratio), (0.0, 0.0, 0.0));
        assert!(zero.holds);
    }
}
