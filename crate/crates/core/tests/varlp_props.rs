use pittlab::funcdsl::ScalarFn;
use pittlab::varlp::{
    luxemburg_norm, modular, modular_scaled, scalar_profile, ExponentProfile, LineFunction, MODULAR_REL_TOL,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_profile(rng: &mut impl Rng) -> String {
    let a = rng.gen_range(0.2..5.0);
    let b = rng.gen_range(0.3..4.0);
    match rng.gen_range(0..4) {
        0 => format!("{a}*exp(-{b}*t^2)"),
        1 => format!("{a}*chi(0,{b})"),
        2 => format!("{a}/(1+{b}*t^2)"),
        _ => format!("{a}*exp(-{b}*t)*chi(0,{})", b + 1.0),
    }
}

fn norm_of(src: &str, p: &ExponentProfile) -> f64 {
    let f = ScalarFn::parse(src).unwrap();
    let prof = scalar_profile(&f);
    luxemburg_norm(&LineFunction::new(&prof, f.knots()), p, 1e-12)
        .unwrap()
        .norm
}

#[test]
fn constant_exponent_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let src = random_profile(&mut rng);
        let p0: f64 = rng.gen_range(1.0..4.0);
        let p = ExponentProfile::constant(p0).unwrap();
        let f = ScalarFn::parse(&src).unwrap();
        let prof = scalar_profile(&f);
        let line = LineFunction::new(&prof, f.knots());
        let rho = modular(&line, &p, MODULAR_REL_TOL).unwrap();
        let norm = luxemburg_norm(&line, &p, 1e-12).unwrap().norm;
        let expected = rho.powf(1.0 / p0);
        assert!(
            (norm / expected - 1.0).abs() < 1e-8,
            "{src}, p = {p0}: {norm} vs {expected}"
        );
    }
}

#[test]
fn homogeneity_and_unit_ball() {
    let p = ExponentProfile::parse("2 - 1/(2*(1+t^2))").unwrap();
    let base = "exp(-3.141592653589793*t^2)";
    let n1 = norm_of(base, &p);
    for c in [0.1, 3.0, 100.0] {
        let nc = norm_of(&format!("{c}*{base}"), &p);
        assert!((nc / (c * n1) - 1.0).abs() < 1e-8, "c = {c}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let src = random_profile(&mut rng);
        let f = ScalarFn::parse(&src).unwrap();
        let prof = scalar_profile(&f);
        let line = LineFunction::new(&prof, f.knots());
        let r = luxemburg_norm(&line, &p, 1e-12).unwrap();
        let rho = modular_scaled(&line, &p, r.norm, MODULAR_REL_TOL).value;
        assert!((rho - 1.0).abs() < 1e-6, "{src}: {rho}");
    }
}

#[test]
fn gaussian_l2_norm() {
    let p = ExponentProfile::constant(2.0).unwrap();
    let norm = norm_of("exp(-3.141592653589793*t^2)", &p);
    assert!((norm - 2f64.powf(-0.25)).abs() < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn modular_is_monotone_in_lambda(seed in any::<u64>(), l1 in 0.05f64..5.0, factor in 1.01f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let src = random_profile(&mut rng);
        let f = ScalarFn::parse(&src).unwrap();
        let prof = scalar_profile(&f);
        let line = LineFunction::new(&prof, f.knots());
        let p = ExponentProfile::parse("2 - 1/(2*(1+t^2))").unwrap();
        let small = modular_scaled(&line, &p, l1, 1e-10).value;
        let large = modular_scaled(&line, &p, l1 * factor, 1e-10).value;
        prop_assert!(small >= large * (1.0 - 1e-9), "{src}: {small} < {large}");
    }
}
