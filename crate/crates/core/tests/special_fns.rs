//! Bessel and Gamma properties checked against frozen high-precision references.

use radial_restriction::special_fns::{
    bessel_j, bessel_j_real, bessel_j_zero, bessel_j_zeros, gamma, BesselOrder,
};

fn order(nu: f64) -> BesselOrder {
    BesselOrder::new(nu).unwrap()
}

/// `(nu, x, J_nu(x))` computed with 40-digit arithmetic (mpmath `besselj`).
fn reference_table() -> Vec<(f64, f64, f64)> {
    let text = include_str!("data/bessel_reference.csv");
    text.lines()
        .skip(1)
        .map(|line| {
            let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
            (cols[0], cols[1], cols[2])
        })
        .collect()
}

#[test]
fn bessel_matches_reference_table() {
    let mut worst = 0.0_f64;
    for (nu, x, expected) in reference_table() {
        let got = bessel_j(order(nu), x);
        let err = (got - expected).abs();
        worst = worst.max(err);
        assert!(err <= 1e-12, "J_{nu}({x}) = {got}, reference {expected}");
        let general = bessel_j_real(nu, x);
        assert!((general - expected).abs() <= 1e-12, "general path J_{nu}({x})");
    }
    assert!(worst < 1e-12);
}

#[test]
fn three_term_recurrence() {
    let mut nu = 1.0;
    while nu <= 5.0 {
        let mut x = 0.05;
        while x <= 100.0 {
            let below = bessel_j(order(nu - 1.0), x);
            let above = bessel_j(order(nu + 1.0), x);
            let mid = bessel_j(order(nu), x);
            let residual = (below + above - 2.0 * nu / x * mid).abs();
            assert!(residual <= 1e-10 * mid.abs().max(1.0), "nu={nu} x={x}: {residual}");
            x += 0.05;
        }
        nu += 0.5;
    }
}

#[test]
fn boundedness_and_asymptotics() {
    for &nu in &[0.0, 0.5, 1.0, 2.0, 3.5, 5.0] {
        let mut x = 0.0;
        while x <= 200.0 {
            assert!(bessel_j(order(nu), x).abs() <= 1.0);
            if x >= 50.0 {
                let scaled = x.sqrt() * bessel_j(order(nu), x).abs();
                assert!(scaled <= (2.0 / std::f64::consts::PI).sqrt() * 1.05);
            }
            x += 0.1;
        }
        let z = 1e-4;
        let ratio = bessel_j(order(nu), z) / z.powf(nu);
        let limit = 1.0 / (2f64.powf(nu) * gamma(nu + 1.0).unwrap());
        assert!((ratio - limit).abs() <= 1e-6 * limit);
    }
}

#[test]
fn zeros_interlace() {
    for &nu in &[0.0, 0.5, 1.0] {
        let low = bessel_j_zeros(order(nu), 21);
        let high = bessel_j_zeros(order(nu + 1.0), 20);
        for k in 0..20 {
            assert!(low[k] < high[k] && high[k] < low[k + 1], "nu={nu} k={k}");
            assert_eq!(bessel_j_zero(order(nu), k + 1).unwrap(), low[k]);
        }
    }
}

#[test]
fn gamma_recurrence() {
    let mut x = 0.5;
    while x <= 50.0 {
        let next = gamma(x + 1.0).unwrap();
        assert!((next - x * gamma(x).unwrap()).abs() / next <= 1e-12, "x={x}");
        x += 0.5;
    }
}
