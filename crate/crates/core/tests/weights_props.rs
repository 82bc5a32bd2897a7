use pittlab::varlp::ExponentProfile;
use pittlab::weights::{bp_power_holds, check_21, check_bp, default_r_grid, Method, Verdict, WeightProfile};
use proptest::prelude::*;

fn tuple() -> impl Strategy<Value = (usize, f64, f64, f64)> {
    (1usize..=3, 1.1f64..4.0, 0.0f64..1.0, 0.0f64..1.0).prop_map(|(n, p, a, b)| {
        let nf = n as f64;
        let alpha = (nf - 1.0) / 2.0 + a * (nf - 1.0) / 2.0;
        let beta = -nf + b * 3.0 * nf;
        (n, p, alpha, beta)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_verdicts((n, p, alpha, beta) in tuple()) {
        let r = check_bp(&WeightProfile::power(beta), p, alpha, n, &default_r_grid()).unwrap();
        prop_assert_eq!(r.method, Method::ClosedForm);
        let nf = n as f64;
        let strict = alpha * p - nf < beta && beta < nf * (p - 1.0);
        prop_assert_eq!(r.verdict == Verdict::Holds && !r.vacuous, strict);
        prop_assert_eq!(r.verdict == Verdict::Holds, beta < nf * (p - 1.0));
    }

    #[test]
    fn wider_with_alpha((n, p, alpha, beta) in tuple(), step in 0.0f64..1.0) {
        let alpha2 = alpha + step * ((n as f64 - 1.0) - alpha);
        let grid = default_r_grid();
        let v = WeightProfile::power(beta);
        let before = check_bp(&v, p, alpha, n, &grid).unwrap().verdict;
        let after = check_bp(&v, p, alpha2, n, &grid).unwrap().verdict;
        if before == Verdict::Holds {
            prop_assert_eq!(after, Verdict::Holds);
        }
        prop_assert_eq!(bp_power_holds(beta, p, alpha, n), before == Verdict::Holds);
    }

    #[test]
    fn constant_exponent_21_matches_bp((n, p, _alpha, beta) in tuple()) {
        let nf = n as f64;
        // Boundaries of the range at alpha = n - 1.
        let band = (beta - ((nf - 1.0) * p - nf)).abs().min((beta - nf * (p - 1.0)).abs());
        prop_assume!(band > 0.05);
        let v = WeightProfile::power(beta);
        let a = check_21(&v, &ExponentProfile::constant(p).unwrap(), n, &default_r_grid()).unwrap();
        let b = check_bp(&v, p, nf - 1.0, n, &default_r_grid()).unwrap();
        prop_assert_eq!(a.verdict, b.verdict, "{}", a.detail);
        prop_assert_eq!(a.vacuous, b.vacuous);
    }
}
