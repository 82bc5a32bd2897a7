use std::f64::consts::PI;

use pittlab::bessel::{bessel_j, check_growth_bounds, zeros, BesselOrder};
use pittlab::funcdsl::log_grid;
use pittlab::quad::{integrate_finite, integrate_finite_opts, QuadOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn recurrence_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        // nu - 1 must stay admissible, so nu starts at 1/2.
        let nu = rng.gen_range(0.5..5.0);
        let t = rng.gen_range(0.5..50.0);
        let j = bessel_j(nu, t).unwrap();
        let lhs = bessel_j(nu - 1.0, t).unwrap() + bessel_j(nu + 1.0, t).unwrap();
        let residual = (lhs - 2.0 * nu / t * j).abs();
        assert!(
            residual <= 1e-9 * (1.0 + j.abs()),
            "nu={nu} t={t} residual={residual:e}"
        );
    }
}

#[test]
fn moment_identity() {
    for nu in [0.0, 0.5, 1.0] {
        for t in [1.0, 5.0, 20.0] {
            let order = BesselOrder::new(nu).unwrap();
            let q = integrate_finite_opts(
                &|r: f64| r.powf(nu + 1.0) * order.eval(r),
                0.0,
                t,
                &QuadOptions::rel(1e-13, 1e-300),
            );
            let exact = t.powf(nu + 1.0) * bessel_j(nu + 1.0, t).unwrap();
            assert!(
                (q.value / exact - 1.0).abs() < 1e-8,
                "nu={nu} t={t}: {} vs {exact}",
                q.value
            );
        }
    }
}

#[test]
fn zero_gaps_approach_pi() {
    let table = zeros(BesselOrder::new(0.0).unwrap(), 50);
    let z = table.zeros();
    assert_eq!(z.len(), 50);
    for w in z[4..].windows(2) {
        assert!((w[1] - w[0] - PI).abs() < 0.1);
    }
    for &x in z {
        assert!(bessel_j(0.0, x).unwrap().abs() <= 1e-12);
    }
}

#[test]
fn growth_constants() {
    let half = check_growth_bounds(BesselOrder::new(0.5).unwrap(), &log_grid(0.01, 100.0, 2001));
    assert!(half <= (2.0 / PI).sqrt() + 0.01);
    let two = check_growth_bounds(BesselOrder::new(2.0).unwrap(), &log_grid(10.0, 1e4, 4001));
    assert!((two / (2.0 / PI).sqrt() - 1.0).abs() < 0.2, "{two}");
    // The constant stays put when the grid is widened.
    let wider = check_growth_bounds(BesselOrder::new(2.0).unwrap(), &log_grid(10.0, 1e5, 8001));
    assert!((wider / two - 1.0).abs() < 0.05);
}

#[test]
fn series_origin() {
    assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
    assert_eq!(bessel_j(1.5, 0.0).unwrap(), 0.0);
    assert!(integrate_finite(&|t: f64| bessel_j(0.0, t).unwrap(), 0.0, 1e-9, 1e-12).value > 0.0);
}
