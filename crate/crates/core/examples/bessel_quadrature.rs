//! Bessel functions, their zeros, and the oscillatory integrals built on them.
//!
//! Run with `cargo run --example bessel_quadrature`.

use std::f64::consts::PI;

use pittlab::bessel::{bessel_j, zeros, BesselOrder};
use pittlab::quad::{integrate_finite, integrate_oscillatory, OscillatoryIntegrand, OscillatoryOptions};

fn main() -> pittlab::Result<()> {
    for t in [0.5, 5.0, 50.0, 500.0] {
        let j = bessel_j(0.5, t)?;
        let exact = (2.0 / (PI * t)).sqrt() * t.sin();
        println!("J_1/2({t}) = {j:.15} (closed form {exact:.15})");
    }

    let table = zeros(BesselOrder::new(0.0)?, 5);
    println!("first zeros of J_0: {:?}", table.zeros());

    let singular = integrate_finite(&|t: f64| t.powf(-0.5), 0.0, 1.0, 1e-10);
    println!(
        "int_0^1 t^(-1/2) dt = {} (+- {:.1e})",
        singular.value, singular.abs_error_estimate
    );

    // int_0^inf e^{-r} J_0(s r) dr = 1 / sqrt(1 + s^2).
    let damped = |r: f64| (-r).exp();
    for s in [1.0, 10.0, 100.0] {
        let g = OscillatoryIntegrand {
            smooth_part: &damped,
            order: BesselOrder::new(0.0)?,
            frequency: s,
            knots: vec![],
            support: None,
        };
        let q = integrate_oscillatory(&g, &OscillatoryOptions::new(1e-12))?;
        println!(
            "s = {s}: {:.14} vs {:.14} ({} zero intervals)",
            q.value,
            1.0 / (1.0 + s * s).sqrt(),
            q.tail_terms_used
        );
    }
    Ok(())
}
