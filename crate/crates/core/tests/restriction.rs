//! Sharp constants against frozen high-precision values and the independent oracle integrator.

use std::f64::consts::PI;

use proptest::prelude::*;
use radial_restriction::radial_fourier::{radial_lp_norm, sphere_norm_of_radial_hat, RadialProfile};
use radial_restriction::restriction::{
    gaussian_lower_bound, gaussian_lower_bound_optimized, kernel_integral, ratio_z,
    sharp_radial_constant, RestrictionParams,
};
use radial_restriction::special_fns::{bessel_j, bessel_j_zeros, BesselOrder, RadialKernel};
use radial_restriction::verify::{elementary_kernel_integral_d3, oracle_integrate, ArchTail, OracleDomain};
use radial_restriction::{Error, Tolerance};

fn tol() -> Tolerance {
    Tolerance::new(1e-10, 1e-15).unwrap()
}

fn params(d: u32, p: f64, q: f64) -> RestrictionParams {
    RestrictionParams::new(d, p, q).unwrap()
}

// mpmath, 40 digits; (3, 1.2) is exactly 1/pi^2.
const FROZEN_INTEGRALS: [(u32, f64, f64); 3] = [
    (3, 1.2, 0.101_321_183_642_337_78),
    (2, 1.1, 0.173_830_707_912_112_92),
    (4, 1.3, 0.068_309_758_065_406_109),
];

#[test]
fn kernel_integrals_match_frozen_values() {
    for (d, p, expected) in FROZEN_INTEGRALS {
        let got = kernel_integral(&params(d, p, 2.0), tol()).unwrap().value;
        assert!((got / expected - 1.0).abs() < 1e-9, "I(d={d}, p={p}) = {got}, expected {expected}");
    }
    assert!((FROZEN_INTEGRALS[0].2 - 1.0 / (PI * PI)).abs() < 1e-16);
}

#[test]
fn d3_integral_agrees_with_elementary_oracle() {
    let production = kernel_integral(&params(3, 1.2, 2.0), tol()).unwrap().value;
    let oracle = elementary_kernel_integral_d3(1.2, tol()).unwrap().value;
    assert!((production - oracle).abs() / oracle < 1e-10, "{production} vs {oracle}");
}

#[test]
fn integer_order_integrals_agree_with_arch_oracle() {
    for (d, p, _) in &FROZEN_INTEGRALS[1..] {
        let pr = params(*d, *p, 2.0);
        let nu = 0.5 * (*d as f64 - 2.0);
        let order = BesselOrder::new(nu).unwrap();
        let (beta, pp) = (pr.beta().unwrap(), pr.p_prime());
        let integrand = move |r: f64| r.powf(beta) * bessel_j(order, r).abs().powf(pp);
        let domain = OracleDomain::Arches {
            a: 0.0,
            breakpoints: bessel_j_zeros(order, 400),
            tail: ArchTail::Algebraic { decay: 0.5 * pp - beta },
        };
        let oracle = oracle_integrate(integrand, &domain, tol()).unwrap().value;
        let production = kernel_integral(&pr, tol()).unwrap().value;
        assert!((production - oracle).abs() / oracle < 1e-8, "d={d} p={p}: {production} vs {oracle}");
    }
}

#[test]
fn sharp_constant_matches_both_assemblies() {
    let r = sharp_radial_constant(&params(3, 1.2, 2.0), tol()).unwrap();
    assert!((r.k_rad_first_principles - 4.625_406_328_923_67).abs() < 1e-10);
    assert!((r.k_rad_paper_closed_form - 0.775_840_526_584_727).abs() < 1e-10);
    assert!(r.k_rad_first_principles > 0.0);
}

#[test]
fn outside_convergence_window_is_divergence() {
    let err = sharp_radial_constant(&params(2, 1.4, 2.0), tol()).unwrap_err();
    assert!(matches!(err, Error::Divergence(_)), "{err:?}");
}

#[test]
fn d2_beta_is_one() {
    assert_eq!(params(2, 1.2, 2.0).beta(), Some(1.0));
}

#[test]
fn gaussian_bound_examples() {
    let direct = gaussian_lower_bound(&params(3, 1.0, 2.0), 1.0).unwrap();
    assert!((direct - (-0.5f64).exp() * (4.0 * PI).sqrt()).abs() < 1e-14);
    let opt = gaussian_lower_bound_optimized(&params(3, 1.2, 2.0));
    assert!((opt.sigma_star - 0.5f64.sqrt()).abs() < 1e-6);
}

#[test]
fn gaussian_bound_equals_direct_ratio() {
    let pr = params(2, 1.2, 2.0);
    let kernel = RadialKernel::new(2).unwrap();
    let h = RadialProfile::gaussian(1.0, 2).unwrap();
    let (sphere, _) = sphere_norm_of_radial_hat(&kernel, &h, 2.0, tol()).unwrap();
    let lp = radial_lp_norm(&kernel, &h, 1.2, tol()).unwrap().value;
    let formula = gaussian_lower_bound(&pr, 1.0).unwrap();
    assert!((formula / (sphere / lp) - 1.0).abs() < 1e-8);
    let z = ratio_z(&pr, &h, tol()).unwrap().value;
    assert!((formula / z - 1.0).abs() < 1e-8);
}

#[test]
fn zero_profile_is_domain_error() {
    let err = ratio_z(&params(3, 1.2, 2.0), &RadialProfile::zero(), tol()).unwrap_err();
    assert!(matches!(err, Error::Domain(_)), "{err:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ratio_is_scale_invariant(sigma in 0.4f64..2.5, c in prop_oneof![-50.0f64..-0.02, 0.02f64..50.0]) {
        let pr = params(3, 1.2, 2.0);
        let h = RadialProfile::gaussian(sigma, 3).unwrap();
        let z = ratio_z(&pr, &h, tol()).unwrap().value;
        let zc = ratio_z(&pr, &h.scaled(c), tol()).unwrap().value;
        prop_assert!((z - zc).abs() <= 1e-9 * z);
    }

    #[test]
    fn exponent_identities(d in 2u32..9, p in 1.001f64..3.0) {
        let pr = params(d, p, 2.0);
        prop_assert!((1.0 / p + 1.0 / pr.p_prime() - 1.0).abs() < 1e-12);
        let independent = pr.p_prime() * (1.0 - d as f64 / 2.0) + d as f64 - 1.0;
        prop_assert!((pr.beta().unwrap() - independent).abs() < 1e-9 * independent.abs().max(1.0));
    }

    #[test]
    fn gaussian_bound_never_exceeds_sharp_constant(d in 2u32..6, t in 0.05f64..0.95, q in 1.0f64..4.0) {
        let p = 1.0 + t * (2.0 * d as f64 / (d as f64 + 1.0) - 1.0);
        let pr = params(d, p, q);
        let k = sharp_radial_constant(&pr, tol()).unwrap().k_rad_first_principles;
        prop_assert!(gaussian_lower_bound_optimized(&pr).bound <= k * (1.0 + 1e-6));
    }
}
