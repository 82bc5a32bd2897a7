//! Variable-exponent Luxemburg norms, translation towards the limit exponent,
//! and the log-Hoelder modulus.
//!
//! Run with `cargo run --example norms`.

use pittlab::funcdsl::{log_grid, ScalarFn};
use pittlab::varlp::{
    log_holder_modulus, luxemburg_norm, scalar_profile, translate_norm_limit, ExponentProfile, LineFunction,
};

fn main() -> pittlab::Result<()> {
    let p = ExponentProfile::parse("2 - 1/(2*(1+t^2))")?;
    println!(
        "p: ess inf {}, ess sup {}, limit {:?}, {:?}",
        p.p_minus(),
        p.p_plus(),
        p.p_diamond(),
        p.monotone()
    );

    let f = ScalarFn::parse("exp(-3.141592653589793*t^2)")?;
    let profile = scalar_profile(&f);
    let line = LineFunction::new(&profile, f.knots());

    let two = luxemburg_norm(&line, &ExponentProfile::constant(2.0)?, 1e-12)?;
    println!("||f||_2 = {:.12} (2^(-1/4) = {:.12})", two.norm, 2f64.powf(-0.25));
    let var = luxemburg_norm(&line, &p, 1e-12)?;
    println!(
        "||f||_p(.) = {:.12}, modular there 1 + {:.3e}, {} iterations",
        var.norm,
        var.modular_at_norm - 1.0,
        var.iterations
    );

    for (h, n) in [0.0, 1.0, 10.0, 100.0]
        .iter()
        .zip(translate_norm_limit(&line, &p, &[0.0, 1.0, 10.0, 100.0], 1e-10)?)
    {
        println!("  ||tau_{h} f|| = {:.10}", n.norm);
    }

    let radii = log_grid(1e-8, 0.4, 30);
    println!("log-Hoelder modulus at 0: {:.4}", log_holder_modulus(&p, 0.0, &radii));
    let jump = ExponentProfile::parse("piece(1, 1.5, 2)")?;
    println!(
        "log-Hoelder modulus of a jump: {:.4}",
        log_holder_modulus(&jump, 1.0, &radii)
    );
    Ok(())
}
