//! Dominance suite end to end, and oracle self-consistency.

use proptest::prelude::*;
use radial_restriction::restriction::RestrictionParams;
use radial_restriction::verify::{
    oracle_integrate, run_dominance_suite, DominanceOptions, DominanceReport, OracleDomain, ProfileFamily,
    RandomRadialSpec,
};
use radial_restriction::Tolerance;

fn grid() -> Vec<RestrictionParams> {
    [(2, 1.1), (3, 1.2), (4, 1.3)]
        .iter()
        .map(|&(d, p)| RestrictionParams::new(d, p, 2.0).unwrap())
        .collect()
}

#[test]
fn suite_with_injected_extremal_is_sharp() {
    let spec = RandomRadialSpec { seed: 11, family: ProfileFamily::Mixed, count: 40 };
    let options = DominanceOptions { inject_extremal: true, ..DominanceOptions::default() };
    let report = run_dominance_suite(&grid(), &spec, options);
    assert!(report.passed(), "{}", report.to_json());
    for point in &report.points {
        assert_eq!(point.trials, 41);
        assert!((point.extremal_ratio.unwrap() - 1.0).abs() < 1e-6);
        assert!(point.margin.unwrap() > -1e-6);
    }
}

#[test]
fn every_family_passes() {
    for family in [ProfileFamily::GaussianMixture, ProfileFamily::PolynomialTimesGaussian, ProfileFamily::CompactBump] {
        let spec = RandomRadialSpec { seed: 3, family, count: 25 };
        let report = run_dominance_suite(&grid(), &spec, DominanceOptions::default());
        assert!(report.passed(), "{family:?}: {}", report.to_json());
        assert!(report.points.iter().all(|p| p.margin.unwrap() > 0.0));
    }
}

#[test]
fn report_round_trips_and_repeats() {
    let spec = RandomRadialSpec { seed: 42, family: ProfileFamily::Mixed, count: 15 };
    let a = run_dominance_suite(&grid(), &spec, DominanceOptions::default());
    let b = run_dominance_suite(&grid(), &spec, DominanceOptions::default());
    assert_eq!(a.to_json(), b.to_json());
    let back: DominanceReport = serde_json::from_str(&a.to_json()).unwrap();
    assert_eq!(back, a);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // Tightening the requested accuracy moves the result by less than the looser estimate.
    #[test]
    fn refinement_stays_within_error_estimate(w in 0.5f64..20.0, b in 0.5f64..15.0) {
        let f = move |x: f64| (w * x).cos() * (-x).exp() + x.sqrt();
        let domain = OracleDomain::Finite { a: 0.0, b };
        let coarse = oracle_integrate(f, &domain, Tolerance::new(1e-6, 1e-14).unwrap()).unwrap();
        let fine = oracle_integrate(f, &domain, Tolerance::new(1e-12, 1e-16).unwrap()).unwrap();
        prop_assert!((coarse.value - fine.value).abs() <= coarse.error_estimate.max(1e-15 * fine.value.abs()));
    }
}
