//! Radial Fourier transforms, the two majorants, and the ball indicator whose
//! transform escapes the first majorant.
//!
//! Run with `cargo run --example transforms`.

use std::f64::consts::PI;

use pittlab::hankel::{envelope_ratio, majorant_ratio_sweep, radial_ft, RadialProfile};

fn main() -> pittlab::Result<()> {
    for n in 1..=3 {
        let g = RadialProfile::parse("exp(-3.141592653589793*t^2)", n)?;
        let s = radial_ft(&g, 1.0, 1e-12)?;
        println!("n = {n}: Gaussian^(1) = {:.12} (e^-pi = {:.12})", s.value, (-PI).exp());
    }

    let chi = RadialProfile::parse("chi(0,1)", 1)?;
    for xi in [0.25, 1.0, 3.7] {
        let s = radial_ft(&chi, xi, 1e-12)?;
        println!(
            "chi^({xi}) = {:+.12} vs {:+.12}",
            s.value,
            (2.0 * PI * xi).sin() / (PI * xi)
        );
    }

    let member = RadialProfile::parse("t^(-0.5)*exp(-t)", 2)?.with_monotone_class(0.5)?;
    println!("\n|f^| / majorant for r^(-1/2) e^(-r) in the plane:");
    for row in majorant_ratio_sweep(&member, &[0.1, 1.0, 10.0, 100.0], 1e-10)? {
        println!(
            "  xi = {:>6}: ratio {:.4}, hl/cfl {:.4}",
            row.xi, row.ratio, row.hl_over_cfl
        );
    }

    let ball = RadialProfile::parse("chi(0,1)", 2)?;
    println!("\nball in the plane, envelope of |f^| / majorant:");
    for xi in [2.0, 20.0, 200.0] {
        println!("  xi = {xi:>5}: {:.4}", envelope_ratio(&ball, xi, 8, 1e-10)?);
    }
    Ok(())
}
