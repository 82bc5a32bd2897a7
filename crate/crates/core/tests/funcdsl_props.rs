use pittlab::funcdsl::{parse, Expr, Func};
use pittlab::Error;
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        3 => Just(Expr::Var),
        2 => (0.0f64..10.0).prop_map(Expr::Lit),
        1 => (0u32..5).prop_map(|k| Expr::Lit(k as f64)),
        1 => (1e-3f64..1e3).prop_map(Expr::Lit),
    ]
}

fn func() -> impl Strategy<Value = Func> {
    prop_oneof![
        Just(Func::Exp),
        Just(Func::Log),
        Just(Func::Sin),
        Just(Func::Cos),
        Just(Func::Sqrt),
        Just(Func::Abs),
    ]
}

/// Trees of depth at most 6 (a leaf has depth 1).
fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(5, 64, 3, |inner| {
        let b = |e: Expr| Box::new(e);
        prop_oneof![
            inner.clone().prop_map(move |a| Expr::Neg(b(a))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Add(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Sub(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Mul(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Div(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Pow(b(x), b(y))),
            (func(), inner.clone()).prop_map(move |(f, a)| Expr::Call(f, b(a))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Min(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Max(b(x), b(y))),
            (inner.clone(), inner.clone(), inner.clone()).prop_map(move |(c, x, y)| Expr::Piece(b(c), b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Chi(b(x), b(y))),
        ]
    })
}

fn depth(e: &Expr) -> usize {
    match e {
        Expr::Lit(_) | Expr::Inf | Expr::Var => 1,
        Expr::Neg(a) | Expr::Call(_, a) => 1 + depth(a),
        Expr::Add(a, b)
        | Expr::Sub(a, b)
        | Expr::Mul(a, b)
        | Expr::Div(a, b)
        | Expr::Pow(a, b)
        | Expr::Min(a, b)
        | Expr::Max(a, b)
        | Expr::Chi(a, b) => 1 + depth(a).max(depth(b)),
        Expr::Piece(c, a, b) => 1 + depth(c).max(depth(a)).max(depth(b)),
    }
}

/// Bitwise comparison of extended-real results; errors compare by kind.
fn same(a: &Result<f64, Error>, b: &Result<f64, Error>) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => x.to_bits() == y.to_bits(),
        (Err(x), Err(y)) => std::mem::discriminant(x) == std::mem::discriminant(y),
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn print_parse_round_trip(e in expr(), ts in prop::collection::vec(1e-3f64..1e3, 20)) {
        prop_assert!(depth(&e) <= 6);
        let printed = e.to_string();
        let back = parse(&printed).unwrap();
        prop_assert_eq!(&back, &e, "{}", printed);
        for t in ts {
            let (x, y) = (e.eval(t), back.eval(t));
            prop_assert!(same(&x, &y), "t = {t}: {x:?} vs {y:?}");
            if let Ok(v) = x {
                prop_assert!(!v.is_nan());
            }
        }
    }

    #[test]
    fn whitespace_is_insignificant(e in expr()) {
        let printed = e.to_string();
        let compact: String = printed.chars().filter(|c| !c.is_whitespace()).collect();
        let padded = printed.replace('(', " (\t ").replace(')', " ) ").replace(',', "\n,  ");
        prop_assert_eq!(parse(&compact).unwrap(), e.clone());
        prop_assert_eq!(parse(&padded).unwrap(), e);
    }
}

#[test]
fn documented_examples() {
    assert_eq!(
        parse("t^2").unwrap(),
        Expr::Pow(Box::new(Expr::Var), Box::new(Expr::Lit(2.0)))
    );
    let e = parse("2 - 1/(2*(1+t^2))").unwrap();
    assert_eq!(e.eval(1.0).unwrap(), 1.75);
    assert!((e.eval(1e-300).unwrap() - 1.5).abs() < 1e-15);
    assert!((e.eval(1e6).unwrap() - 2.0).abs() < 1e-12);
}
