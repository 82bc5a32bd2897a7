//! Parsing, printing and evaluating profile expressions.
//!
//! Run with `cargo run --example expressions`.

use pittlab::funcdsl::{log_grid, parse, Prop, ScalarFn};

fn main() -> pittlab::Result<()> {
    let p = ScalarFn::parse("2 - 1/(2*(1+t^2))")?;
    println!("p = {}", p.expr());
    for t in [1e-6, 1.0, 10.0, 1e6] {
        println!("  p({t:e}) = {}", p.eval(t)?);
    }

    // Piecewise definitions take the left branch at the threshold.
    let step = parse("piece(1, 1.5, 2)")?;
    println!(
        "piece at the knot: {}, just after: {}",
        step.eval(1.0)?,
        step.eval(1.0 + 1e-12)?
    );

    // `inf` is a valid exponent value and propagates through min/max.
    let q = parse("max(piece(0.05, inf, 2), 1)")?;
    println!("q(0.01) = {}, q(1) = {}", q.eval(0.01)?, q.eval(1.0)?);

    let decreasing = ScalarFn::parse("t^0.5*chi(0,1)")?.with_props([Prop::Nonincreasing]);
    let violations = decreasing.validate_props(&log_grid(0.1, 10.0, 41));
    println!(
        "{} violation(s) of the declared monotonicity, first: {:?}",
        violations.len(),
        violations.first()
    );

    match parse("t^(2") {
        Err(e) => println!("syntax error: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
