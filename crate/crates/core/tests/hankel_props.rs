use std::f64::consts::PI;

use pittlab::hankel::{cfl_majorant, hl_majorant, radial_ft, RadialProfile};

const GAUSS: &str = "exp(-3.141592653589793*t^2)";

#[test]
fn dilation_rule() {
    for n in 1..=3 {
        let f = RadialProfile::parse(GAUSS, n).unwrap();
        for lambda in [0.25, 4.0] {
            let g = f.dilated(lambda);
            for xi in [0.1, 0.3, 0.5] {
                let a = radial_ft(&g, xi, 1e-13).unwrap().value;
                let b = radial_ft(&f, xi / lambda, 1e-13).unwrap().value;
                assert!((a / b - 1.0).abs() < 1e-6, "n={n} lambda={lambda} xi={xi}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn linearity() {
    for n in 1..=3 {
        let f = RadialProfile::parse(GAUSS, n).unwrap();
        let g = RadialProfile::parse("exp(-t)*chi(0,2)", n).unwrap();
        let sum = f.sum(&g).unwrap();
        for xi in [0.2, 1.0, 2.7] {
            let (a, b, c) = (
                radial_ft(&f, xi, 1e-10).unwrap(),
                radial_ft(&g, xi, 1e-10).unwrap(),
                radial_ft(&sum, xi, 1e-10).unwrap(),
            );
            let budget = a.quad.abs_error_estimate + b.quad.abs_error_estimate + c.quad.abs_error_estimate + 1e-14;
            assert!((a.value + b.value - c.value).abs() <= budget, "n={n} xi={xi}");
        }
    }
}

#[test]
fn gaussian_fixed_point_where_representable() {
    // Absolute accuracy is ~1e-16, so a relative bound of 1e-7 is only
    // meaningful while the value stays above ~1e-9.
    for n in 1..=3 {
        let f = RadialProfile::parse(GAUSS, n).unwrap();
        for i in 0..=48 {
            let xi = 0.1 + 0.05 * i as f64;
            let exact = (-PI * xi * xi).exp();
            let got = radial_ft(&f, xi, 1e-13).unwrap().value;
            assert!((got / exact - 1.0).abs() <= 1e-7, "n={n} xi={xi}: {got} vs {exact}");
        }
    }
}

#[test]
fn majorants_coincide_in_one_dimension() {
    let f = RadialProfile::parse("exp(-t)", 1).unwrap();
    for xi in [0.01, 0.3, 7.0] {
        assert_eq!(hl_majorant(&f, xi).unwrap(), cfl_majorant(&f, xi).unwrap());
    }
    let g = RadialProfile::parse("t^(-1)*chi(0,1)", 3).unwrap();
    assert!((cfl_majorant(&g, 2.0).unwrap() - 0.25).abs() < 1e-12);
    assert!((hl_majorant(&g, 1.0).unwrap() - 0.5).abs() < 1e-12);
}
