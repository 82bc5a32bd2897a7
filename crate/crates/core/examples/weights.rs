//! Deciding weight conditions in closed form and by numeric scan.
//!
//! Run with `cargo run --example weights`.

use pittlab::funcdsl::ScalarFn;
use pittlab::varlp::ExponentProfile;
use pittlab::weights::{check_21, check_bp, check_hardy_conditions, default_r_grid, hardy_operator, WeightProfile};

fn main() -> pittlab::Result<()> {
    let grid = default_r_grid();
    for (v, p, alpha, n) in [
        ("1", 2.0, 0.0, 1),
        ("t^4", 2.0, 1.0, 2),
        ("t^(-0.8)", 2.0, 1.0, 3),
        ("1+t", 3.0, 0.0, 1),
    ] {
        let r = check_bp(&WeightProfile::parse(v)?, p, alpha, n, &grid)?;
        println!(
            "v = {v:<9} p = {p} alpha = {alpha} n = {n}: {:?} via {:?} ({})",
            r.verdict, r.method, r.detail
        );
    }

    let v = WeightProfile::parse("1")?;
    let p = ExponentProfile::parse("piece(1, 2, 1.5 + 0.5/t)")?;
    let r = check_21(&v, &p, 1, &grid)?;
    println!(
        "variable exponent, v = 1: {:?}, sup ratio {:.4} at r = {:.3e}",
        r.verdict, r.sup_ratio, r.witness_r
    );

    let (a, b) = check_hardy_conditions(&WeightProfile::power(0.5), 2.0, 0.5, 2, &grid)?;
    println!(
        "Hardy conditions for t^0.5: A {:?} ({:.4}), B {:?} ({:.4})",
        a.verdict, a.sup_ratio, b.verdict, b.sup_ratio
    );

    let g = ScalarFn::parse("t^(-0.5)")?;
    println!("H(t^-1/2)(1) = {}", hardy_operator(&g, 1.0)?);
    Ok(())
}
