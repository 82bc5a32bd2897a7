//! Radial Fourier transforms on `R^n` and their majorants.
//!
//! The transform is normalized as `f^(xi) = int f(x) e^{-2 pi i x.xi} dx`, so a
//! radial `f(x) = f0(|x|)` has
//!
//! ```text
//! f^(xi) = 2 pi xi^{1 - n/2} int_0^inf r^{n/2} f0(r) J_{n/2-1}(2 pi xi r) dr.
//! ```
//!
//! Under this normalization `exp(-pi |x|^2)` is its own transform in every
//! dimension.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::bessel::BesselOrder;
use crate::error::{Error, Result};
use crate::funcdsl::{log_grid, validate_samples, Expr, Prop, ScalarFn};
use crate::quad::{
    integrate_from_zero_with_knots, integrate_half_line, integrate_oscillatory, OscillatoryIntegrand,
    OscillatoryOptions, QuadOptions, QuadResult,
};

/// A radial function on `R^n` given by its profile `f0`.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    f0: ScalarFn,
    dim: usize,
    monotone_class: Option<f64>,
}

impl RadialProfile {
    pub fn new(f0: ScalarFn, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        Ok(RadialProfile {
            f0,
            dim,
            monotone_class: None,
        })
    }

    pub fn parse(src: &str, dim: usize) -> Result<Self> {
        Self::new(ScalarFn::parse(src)?, dim)
    }

    /// Declares that `t^alpha f0(t)` is nonincreasing with limit zero, after
    /// confirming it on a log grid over `[1e-6, 1e6]`.
    pub fn with_monotone_class(mut self, alpha: f64) -> Result<Self> {
        let mut grid = log_grid(1e-6, 1e6, 241);
        for k in self.f0.knots() {
            if k > 0.0 {
                grid.extend([k * (1.0 - 1e-9), k, k * (1.0 + 1e-9)]);
            }
        }
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let values: Vec<Result<f64>> = grid.iter().map(|&t| Ok(t.powf(alpha) * self.f0.eval(t)?)).collect();
        let props = [Prop::Nonincreasing, Prop::LimitZeroAtInfinity].into_iter().collect();
        let violations = validate_samples(&props, &grid, &values);
        if let Some(v) = violations.first() {
            return Err(Error::InvalidInput(format!(
                "t^{alpha} * ({}) is not in the monotone class: {}",
                self.f0, v.detail
            )));
        }
        self.monotone_class = Some(alpha);
        Ok(self)
    }

    pub fn f0(&self) -> &ScalarFn {
        &self.f0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn monotone_class(&self) -> Option<f64> {
        self.monotone_class
    }

    pub fn order(&self) -> BesselOrder {
        BesselOrder::for_dimension(self.dim as u32)
    }

    /// `f_lambda(x) = lambda^n f(lambda x)`, whose transform is `f^(xi / lambda)`.
    pub fn dilated(&self, lambda: f64) -> RadialProfile {
        let scaled_arg = Expr::Mul(Box::new(Expr::Lit(lambda)), Box::new(Expr::Var));
        let expr = Expr::Mul(
            Box::new(Expr::Lit(lambda.powi(self.dim as i32))),
            Box::new(self.f0.expr().substitute(&scaled_arg)),
        );
        RadialProfile {
            f0: ScalarFn::from_expr(expr),
            dim: self.dim,
            monotone_class: self.monotone_class,
        }
    }

    /// Pointwise sum, used for linearity checks.
    pub fn sum(&self, other: &RadialProfile) -> Result<RadialProfile> {
        if self.dim != other.dim {
            return Err(Error::InvalidInput("dimension mismatch".into()));
        }
        let expr = Expr::Add(Box::new(self.f0.expr().clone()), Box::new(other.f0.expr().clone()));
        RadialProfile::new(ScalarFn::from_expr(expr), self.dim)
    }

    fn value(&self, r: f64) -> f64 {
        self.f0.value(r)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TransformSample {
    pub xi: f64,
    pub value: f64,
    pub quad: QuadResult,
    /// Set when the profile carries no monotone-class declaration, so
    /// convergence of the defining integral is not guaranteed a priori.
    pub warning: Option<String>,
}

/// Surface area of the unit sphere in `R^n`.
pub fn sphere_area(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0)
}

/// `f^(xi)` for `xi > 0`, accurate to `tol` in absolute terms.
pub fn radial_ft(f: &RadialProfile, xi: f64, tol: f64) -> Result<TransformSample> {
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(Error::InvalidInput(format!("xi = {xi} must be positive and finite")));
    }
    let n = f.dim as f64;
    let prefactor = 2.0 * PI * xi.powf(1.0 - n / 2.0);
    let smooth = |r: f64| {
        let v = f.value(r);
        if v == 0.0 {
            0.0
        } else {
            r.powf(n / 2.0) * v
        }
    };
    let g = OscillatoryIntegrand {
        smooth_part: &smooth,
        order: f.order(),
        frequency: 2.0 * PI * xi,
        knots: f.f0.knots(),
        support: f.f0.support_bound(),
    };
    let q = integrate_oscillatory(&g, &OscillatoryOptions::new(tol / prefactor))?;
    let quad = QuadResult {
        value: prefactor * q.value,
        abs_error_estimate: prefactor * q.abs_error_estimate,
        ..q
    };
    let warning = if f.monotone_class.is_none() {
        Some("no monotone class declared; convergence of the transform integral is not guaranteed".into())
    } else {
        None
    };
    Ok(TransformSample {
        xi,
        value: quad.value,
        quad,
        warning,
    })
}

/// `f^(0) = |S^{n-1}| int_0^inf r^{n-1} f0(r) dr`, to relative accuracy `tol`.
pub fn radial_ft_at_zero(f: &RadialProfile, tol: f64) -> Result<f64> {
    let n = f.dim as i32;
    let g = |r: f64| {
        let v = f.value(r);
        if v == 0.0 {
            0.0
        } else {
            r.powi(n - 1) * v
        }
    };
    let q = radial_integral(&g, &f.f0.knots(), f.f0.support_bound(), &QuadOptions::rel(tol, 1e-300))?;
    Ok(sphere_area(f.dim) * q.value)
}

/// `int_0^inf g` with `knots` as panel breaks and optional bounded support.
fn radial_integral(
    g: &dyn Fn(f64) -> f64,
    knots: &[f64],
    support: Option<f64>,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    match support {
        Some(b) => integrate_from_zero_with_knots(g, b, knots, opts),
        None => {
            let split = knots.iter().copied().filter(|&k| k > 0.0).fold(1.0, f64::max);
            let head = integrate_from_zero_with_knots(g, split, knots, opts)?;
            let tail = crate::quad::integrate_to_infinity(g, split, opts);
            let tail = tail.require_converged("radial tail integral")?;
            Ok(QuadResult {
                value: head.value + tail.value,
                abs_error_estimate: head.abs_error_estimate + tail.abs_error_estimate,
                panels_used: head.panels_used + tail.panels_used,
                tail_terms_used: tail.tail_terms_used,
                converged: true,
            })
        }
    }
}

const MAJORANT_REL_TOL: f64 = 1e-12;

fn majorant(f: &RadialProfile, xi: f64, kernel_power: f64) -> Result<f64> {
    if !(xi > 0.0) {
        return Err(Error::InvalidInput(format!("xi = {xi} must be positive")));
    }
    let g = |r: f64| {
        let v = f.value(r);
        if v == 0.0 {
            0.0
        } else {
            r.powf(kernel_power) * v
        }
    };
    let b = 1.0 / xi;
    let q = integrate_from_zero_with_knots(&g, b, &f.f0.knots(), &QuadOptions::rel(MAJORANT_REL_TOL, 1e-300))?;
    Ok(q.value)
}

/// `int_0^{1/xi} r^{n-1} f0(r) dr`.
pub fn hl_majorant(f: &RadialProfile, xi: f64) -> Result<f64> {
    majorant(f, xi, f.dim as f64 - 1.0)
}

/// `xi^{-(n-1)/2} int_0^{1/xi} r^{(n-1)/2} f0(r) dr`.
pub fn cfl_majorant(f: &RadialProfile, xi: f64) -> Result<f64> {
    let h = (f.dim as f64 - 1.0) / 2.0;
    Ok(xi.powf(-h) * majorant(f, xi, h)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MajorantRow {
    pub xi: f64,
    pub ft: f64,
    pub hl: f64,
    pub cfl: f64,
    /// `|f^(xi)| / hl`.
    pub ratio: f64,
    pub hl_over_cfl: f64,
}

/// Transform and both majorants on every grid point, in parallel.
pub fn majorant_ratio_sweep(f: &RadialProfile, xi_grid: &[f64], tol: f64) -> Result<Vec<MajorantRow>> {
    xi_grid
        .par_iter()
        .map(|&xi| {
            let ft = radial_ft(f, xi, tol)?.value;
            let hl = hl_majorant(f, xi)?;
            let cfl = cfl_majorant(f, xi)?;
            Ok(MajorantRow {
                xi,
                ft,
                hl,
                cfl,
                ratio: ft.abs() / hl,
                hl_over_cfl: hl / cfl,
            })
        })
        .collect()
}

/// `max_j |f^(xi + j / samples)| / hl(xi)` for `j < samples`: the ratio of the
/// local envelope of an oscillating transform to the majorant. One unit of
/// `xi` spans roughly one oscillation of `J(2 pi xi r)` for profiles supported
/// in `[0, 1]`.
pub fn envelope_ratio(f: &RadialProfile, xi: f64, samples: usize, tol: f64) -> Result<f64> {
    let env = (0..samples.max(1))
        .into_par_iter()
        .map(|j| radial_ft(f, xi + j as f64 / samples as f64, tol).map(|s| s.value.abs()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(env / hl_majorant(f, xi)?)
}

/// Cubic spline of `f^` on a uniform grid over `[0, xi_max]`, zero
/// beyond. Used where the transform is needed at very many points.
#[derive(Debug, Clone)]
pub struct TransformTable {
    step: f64,
    values: Vec<f64>,
    second: Vec<f64>,
}

impl TransformTable {
    pub fn build(f: &RadialProfile, xi_max: f64, intervals: usize, tol: f64) -> Result<Self> {
        if intervals < 2 || !(xi_max > 0.0) {
            return Err(Error::InvalidInput("transform table needs at least 2 intervals".into()));
        }
        let step = xi_max / intervals as f64;
        let mut values = (1..=intervals)
            .into_par_iter()
            .map(|k| radial_ft(f, k as f64 * step, tol).map(|s| s.value))
            .collect::<Result<Vec<f64>>>()?;
        values.insert(0, radial_ft_at_zero(f, 1e-12)?);
        let second = spline_second_derivatives(&values, step);
        Ok(TransformTable { step, values, second })
    }

    pub fn xi_max(&self) -> f64 {
        self.step * (self.values.len() - 1) as f64
    }

    pub fn eval(&self, xi: f64) -> f64 {
        let x = xi.abs();
        let n = self.values.len() - 1;
        if x >= self.xi_max() {
            return if x == self.xi_max() { self.values[n] } else { 0.0 };
        }
        let k = ((x / self.step) as usize).min(n - 1);
        let h = self.step;
        let a = ((k + 1) as f64 * h - x) / h;
        let b = 1.0 - a;
        a * self.values[k]
            + b * self.values[k + 1]
            + ((a * a * a - a) * self.second[k] + (b * b * b - b) * self.second[k + 1]) * h * h / 6.0
    }
}

fn spline_second_derivatives(y: &[f64], h: f64) -> Vec<f64> {
    // Rows (1, 4, 1) m = 6 (y[i-1] - 2 y[i] + y[i+1]) / h^2 in the interior.
    // The transform of a radial function is even, so the left end is clamped
    // with zero slope: 2 m_0 + m_1 = 6 (y_1 - y_0) / h^2. The right end is natural.
    let n = y.len() - 1;
    let mut m = vec![0.0; n + 1];
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = 0.5;
    d[0] = 3.0 * (y[1] - y[0]) / (h * h);
    for i in 1..n {
        let rhs = 6.0 * (y[i - 1] - 2.0 * y[i] + y[i + 1]) / (h * h);
        let denom = 4.0 - c[i - 1];
        c[i] = 1.0 / denom;
        d[i] = (rhs - d[i - 1]) / denom;
    }
    for i in (0..n).rev() {
        m[i] = d[i] - c[i] * m[i + 1];
    }
    m
}

/// `int_0^inf r^{n-1} |f0|` restricted to the profile, used as an L1 scale.
pub fn radial_l1(f: &RadialProfile) -> Result<f64> {
    let n = f.dim as i32;
    let g = |r: f64| r.powi(n - 1) * f.value(r).abs();
    let q = integrate_half_line(&g, 1.0, &QuadOptions::rel(1e-10, 1e-300));
    Ok(sphere_area(f.dim) * q.require_converged("L1 norm")?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(n: usize) -> RadialProfile {
        RadialProfile::parse("exp(-3.141592653589793*t^2)", n).unwrap()
    }

    #[test]
    fn gaussian_self_dual() {
        let expected = (-PI).exp();
        for n in 1..=3 {
            let s = radial_ft(&gaussian(n), 1.0, 1e-12).unwrap();
            assert!((s.value - expected).abs() < 1e-10, "n={n}: {s:?}");
        }
    }

    #[test]
    fn indicator_closed_form() {
        let f = RadialProfile::parse("chi(0,1)", 1).unwrap();
        for xi in [0.25, 1.0, 3.7] {
            let v = radial_ft(&f, xi, 1e-12).unwrap().value;
            let exact = (2.0 * PI * xi).sin() / (PI * xi);
            assert!((v - exact).abs() < 1e-10, "xi={xi}: {v} vs {exact}");
        }
        assert!(radial_ft(&f, 0.0, 1e-8).is_err());
    }

    #[test]
    fn transform_at_zero() {
        let v = radial_ft_at_zero(&gaussian(3), 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        let ball = RadialProfile::parse("chi(0,1)", 2).unwrap();
        assert!((radial_ft_at_zero(&ball, 1e-12).unwrap() - PI).abs() < 1e-10);
    }

    #[test]
    fn necessity_witness_lower_bound() {
        // f0 = r^{-2} on [0, r0] in R^3; the transform is comparable to r0 at low frequency.
        for r0 in [0.25, 1.0, 4.0] {
            let f = RadialProfile::parse(&format!("t^(-2)*chi(0,{r0})"), 3).unwrap();
            let v = radial_ft(&f, 1.0 / (6.0 * r0), 1e-10).unwrap().value;
            assert!(v / r0 > 1.0, "r0={r0}: {v}");
        }
    }

    #[test]
    fn majorant_examples() {
        let ind = RadialProfile::parse("chi(0,1)", 1).unwrap();
        assert!((hl_majorant(&ind, 2.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((cfl_majorant(&ind, 2.0).unwrap() - 0.5).abs() < 1e-12);

        let inv = RadialProfile::parse("1/t", 3).unwrap();
        assert!((hl_majorant(&inv, 1.0).unwrap() - 0.5).abs() < 1e-12);

        let g = gaussian(1);
        assert!((hl_majorant(&g, 1e-3).unwrap() - 0.5).abs() < 1e-9);

        let ball3 = RadialProfile::parse("chi(0,1)", 3).unwrap();
        assert!((cfl_majorant(&ball3, 1.0).unwrap() - 0.5).abs() < 1e-12);

        let cut = RadialProfile::parse("t^(-1)*chi(0,1)", 3).unwrap();
        assert!((cfl_majorant(&cut, 2.0).unwrap() - 0.25).abs() < 1e-12);

        let singular = RadialProfile::parse("t^(-3)", 3).unwrap();
        assert!(matches!(hl_majorant(&singular, 1.0), Err(Error::Divergent(_))));
    }

    #[test]
    fn monotone_class_validation() {
        let ok = RadialProfile::parse("t^(-0.5)*exp(-t)", 2)
            .unwrap()
            .with_monotone_class(0.5);
        assert!(ok.is_ok());
        let bad = RadialProfile::parse("(1+t)^(-2)", 2).unwrap().with_monotone_class(0.5);
        assert!(bad.is_err());
    }

    #[test]
    fn dilation_rule() {
        let f = gaussian(2);
        for lambda in [0.25, 4.0] {
            let a = radial_ft(&f.dilated(lambda), 0.7, 1e-13).unwrap().value;
            let b = radial_ft(&f, 0.7 / lambda, 1e-13).unwrap().value;
            assert!((a / b - 1.0).abs() < 1e-6, "lambda={lambda}: {a} {b}");
        }
    }

    #[test]
    fn ball_ratio_grows() {
        let ball = RadialProfile::parse("chi(0,1)", 2).unwrap();
        let r10 = envelope_ratio(&ball, 10.0, 8, 1e-12).unwrap();
        let r100 = envelope_ratio(&ball, 100.0, 8, 1e-12).unwrap();
        let growth = r100 / r10;
        assert!((growth / 10f64.sqrt() - 1.0).abs() < 0.3, "{growth}");
    }

    #[test]
    fn spline_table_reproduces_gaussian() {
        let t = TransformTable::build(&gaussian(1), 4.0, 256, 1e-13).unwrap();
        for xi in [0.0, 0.013, 0.5, 1.37, 3.9] {
            let exact = (-PI * xi * xi).exp();
            assert!((t.eval(xi) - exact).abs() < 1e-7, "{xi}: {} vs {exact}", t.eval(xi));
        }
        assert_eq!(t.eval(5.0), 0.0);
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(1) - 2.0).abs() < 1e-14);
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-13);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
    }
}
