//! Variable-exponent Lebesgue spaces on the real line.
//!
//! Functions and exponents are even profiles on `[0, inf)`; a function may
//! additionally be translated, `x -> f0(|x - shift|)`, while the exponent stays
//! centered, `x -> p0(|x|)`.
//!
//! The modular is `rho_p(f) = int |f(x)|^{p(x)} dx` and the Luxemburg norm is
//! `inf { lambda > 0 : rho_p(f / lambda) <= 1 }`. Where `p(x) = inf` the
//! integrand is 0 for `|f(x)| <= 1` and `+inf` otherwise.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcdsl::{log_grid, Expr, ScalarFn};
use crate::quad::{integrate_finite_opts, integrate_to_infinity, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotone {
    Nondecreasing,
    Nonincreasing,
    None,
}

/// An exponent function `p0` with values in `[1, inf]` and its sampled bounds.
#[derive(Debug, Clone)]
pub struct ExponentProfile {
    p0: ScalarFn,
    p_minus: f64,
    p_plus: f64,
    p_diamond: Option<f64>,
    monotone: Monotone,
}

const SAMPLE_LO: f64 = 1e-8;
const SAMPLE_HI: f64 = 1e8;

impl ExponentProfile {
    /// Samples `p0` on a log grid over `[1e-8, 1e8]` (plus `t = 0` and the
    /// knots) to determine `p_minus`, `p_plus`, the value at infinity and the
    /// monotonicity class.
    pub fn new(p0: ScalarFn) -> Result<Self> {
        let mut grid = vec![0.0];
        grid.extend(log_grid(SAMPLE_LO, SAMPLE_HI, 801));
        for k in p0.knots() {
            if k > 0.0 {
                grid.extend([k * (1.0 - 1e-12), k, k * (1.0 + 1e-12)]);
            }
        }
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let mut vals = Vec::with_capacity(grid.len());
        for &t in &grid {
            let v = p0
                .eval(t)
                .or_else(|e| if t == 0.0 { p0.eval(1e-300) } else { Err(e) })?;
            if !(v >= 1.0) {
                return Err(Error::InvalidInput(format!(
                    "exponent `{p0}` takes the value {v} < 1 at t = {t}"
                )));
            }
            vals.push(v);
        }
        let p_minus = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let p_plus = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let nondecreasing = vals.windows(2).all(|w| w[1] >= w[0] - 1e-12 * w[0].abs());
        let nonincreasing = vals.windows(2).all(|w| w[1] <= w[0] + 1e-12 * w[0].abs());
        let monotone = match (nondecreasing, nonincreasing) {
            (true, _) => Monotone::Nondecreasing,
            (false, true) => Monotone::Nonincreasing,
            _ => Monotone::None,
        };
        let at_inf = *vals.last().expect("nonempty grid");
        Ok(ExponentProfile {
            p0,
            p_minus,
            p_plus,
            p_diamond: Some(at_inf),
            monotone,
        })
    }

    pub fn constant(p: f64) -> Result<Self> {
        Self::new(ScalarFn::constant(p))
    }

    pub fn parse(src: &str) -> Result<Self> {
        Self::new(ScalarFn::parse(src)?)
    }

    pub fn function(&self) -> &ScalarFn {
        &self.p0
    }

    pub fn p_minus(&self) -> f64 {
        self.p_minus
    }

    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }

    /// The exponent observed at `t = 1e8`, taken as the limit at infinity.
    pub fn p_diamond(&self) -> Option<f64> {
        self.p_diamond
    }

    pub fn monotone(&self) -> Monotone {
        self.monotone
    }

    pub fn is_constant(&self) -> bool {
        self.p_minus == self.p_plus
    }

    /// `p(x) = p0(|x|)`. At `x = 0` falls back to `p0(0+)` if `p0(0)` is undefined.
    pub fn at(&self, x: f64) -> f64 {
        let t = x.abs();
        match self.p0.eval(t) {
            Ok(v) => v,
            Err(_) if t == 0.0 => self.p0.value(1e-300),
            Err(_) => f64::NAN,
        }
    }

    /// Whether the hypotheses `p` nondecreasing on `(0, inf)` with
    /// `1 <= p_minus <= p_plus <= 2` hold on the sampling grid.
    pub fn satisfies_hausdorff_young_hypotheses(&self) -> bool {
        self.monotone == Monotone::Nondecreasing && self.p_minus >= 1.0 && self.p_plus <= 2.0
    }

    /// The conjugate exponent `p' = p / (p - 1)` (with `1' = inf`, `inf' = 1`).
    pub fn conjugate(&self) -> Result<Self> {
        Self::new(ScalarFn::from_expr(conjugate_expr(self.p0.expr())))
    }

    /// `t -> p0(1/t)`.
    pub fn inverted_argument(&self) -> Result<Self> {
        let inv = Expr::Div(Box::new(Expr::Lit(1.0)), Box::new(Expr::Var));
        Self::new(ScalarFn::from_expr(self.p0.expr().substitute(&inv)))
    }
}

/// `p / (p - 1)` with the conventions `1' = inf` and `inf' = 1`, built so that
/// the expression evaluator never produces `inf / inf`.
fn conjugate_expr(p: &Expr) -> Expr {
    // p' = 1 + 1/(p - 1): inf -> 1 + 0, 1 -> 1 + inf.
    Expr::Add(
        Box::new(Expr::Lit(1.0)),
        Box::new(Expr::Div(
            Box::new(Expr::Lit(1.0)),
            Box::new(Expr::Sub(Box::new(p.clone()), Box::new(Expr::Lit(1.0)))),
        )),
    )
}

/// A function on the real line given by an even profile, `x -> profile(|x - shift|)`.
pub struct LineFunction<'a> {
    profile: &'a (dyn Fn(f64) -> f64 + Sync),
    knots: Vec<f64>,
    shift: f64,
}

impl<'a> LineFunction<'a> {
    pub fn new(profile: &'a (dyn Fn(f64) -> f64 + Sync), knots: Vec<f64>) -> Self {
        LineFunction {
            profile,
            knots,
            shift: 0.0,
        }
    }

    /// The translate `tau_h f (x) = f(x - h)`.
    pub fn translated(&self, h: f64) -> LineFunction<'a> {
        LineFunction {
            profile: self.profile,
            knots: self.knots.clone(),
            shift: self.shift + h,
        }
    }

    pub fn at(&self, x: f64) -> f64 {
        (self.profile)((x - self.shift).abs())
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }
}

/// Wraps a parsed profile for use as a [`LineFunction`].
pub fn scalar_profile(f: &ScalarFn) -> impl Fn(f64) -> f64 + Sync + '_ {
    move |t| f.value(t)
}

fn pow_ext(u: f64, p: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else if p.is_infinite() {
        if u <= 1.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        u.powf(p)
    }
}

/// Relative accuracy of modular evaluations.
pub const MODULAR_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Modular {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub converged: bool,
}

impl Modular {
    pub fn diverged(&self) -> bool {
        self.value.is_infinite()
    }
}

/// `rho_p(f / lambda)`.
pub fn modular_scaled(f: &LineFunction<'_>, p: &ExponentProfile, lambda: f64, rel_tol: f64) -> Modular {
    let integrand = |x: f64| pow_ext(f.at(x).abs() / lambda, p.at(x));
    let mut special = vec![0.0, f.shift];
    for &k in &f.knots {
        special.push(f.shift + k);
        special.push(f.shift - k);
    }
    for k in p.function().knots() {
        special.push(k);
        special.push(-k);
    }
    let lo = special.iter().copied().fold(f64::INFINITY, f64::min) - 1.0;
    let hi = special.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 1.0;
    let opts = QuadOptions::rel(rel_tol, 1e-300).with_breaks(&special);
    let mid = integrate_finite_opts(&integrand, lo, hi, &opts);
    let tail_opts = QuadOptions::rel(rel_tol, 1e-300);
    let right = integrate_to_infinity(&integrand, hi, &tail_opts);
    let left = integrate_to_infinity(&|x: f64| integrand(-x), -lo, &tail_opts);
    let value = mid.value + right.value + left.value;
    let err = mid.abs_error_estimate + right.abs_error_estimate + left.abs_error_estimate;
    let converged = value.is_finite() && err <= (rel_tol * value.abs()).max(1e-280) * 10.0;
    Modular {
        value: if value.is_nan() { f64::INFINITY } else { value },
        abs_error_estimate: err,
        converged,
    }
}

/// `rho_p(f) = int_R |f(x)|^{p(x)} dx`. Divergence is reported as [`Error::Divergent`].
pub fn modular(f: &LineFunction<'_>, p: &ExponentProfile, rel_tol: f64) -> Result<f64> {
    let m = modular_scaled(f, p, 1.0, rel_tol);
    if m.diverged() {
        Err(Error::Divergent("modular".into()))
    } else {
        Ok(m.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormResult {
    pub norm: f64,
    pub modular_at_norm: f64,
    pub bracket_width: f64,
    pub iterations: usize,
}

const MAX_BISECTIONS: usize = 200;

/// Luxemburg norm by bisection on `lambda`, stopping at relative bracket width
/// `tol`. The returned norm is the upper bracket endpoint, where
/// `rho_p(f / lambda) <= 1`.
pub fn luxemburg_norm(f: &LineFunction<'_>, p: &ExponentProfile, tol: f64) -> Result<NormResult> {
    let rho = |lambda: f64| modular_scaled(f, p, lambda, MODULAR_REL_TOL).value;
    // lambda_0 = ||f||_1 + sup |f| (sampled).
    let l1 = modular_scaled(f, &ExponentProfile::constant(1.0)?, 1.0, 1e-8).value;
    // Singular points (|f| = inf) are skipped; they only matter through the modular.
    let mut sup = 0.0f64;
    let mut sample = |x: f64| {
        let v = f.at(x).abs();
        if v.is_finite() {
            sup = sup.max(v);
        }
    };
    sample(f.shift);
    for x in log_grid(1e-6, 1e6, 241) {
        sample(f.shift + x);
        sample(f.shift - x);
    }
    if sup == 0.0 && l1 == 0.0 {
        return Ok(NormResult {
            norm: 0.0,
            modular_at_norm: 0.0,
            bracket_width: 0.0,
            iterations: 0,
        });
    }
    let lambda0 = if l1.is_finite() { l1 + sup } else { sup.max(1.0) };
    if !lambda0.is_finite() || lambda0 <= 0.0 {
        return Err(Error::NotBracketable(format!(
            "no finite starting scale for the bracket ({lambda0})"
        )));
    }
    let mut iterations = 0;
    let mut hi = lambda0;
    let mut rho_hi = rho(hi);
    let mut doublings = 0;
    while !(rho_hi <= 1.0) {
        doublings += 1;
        if doublings > 60 {
            return Err(Error::NotBracketable(format!(
                "modular exceeds 1 for every lambda up to 2^60 * {lambda0}"
            )));
        }
        hi *= 2.0;
        rho_hi = rho(hi);
        iterations += 1;
    }
    let mut lo = hi;
    loop {
        lo *= 0.5;
        iterations += 1;
        if !(rho(lo) <= 1.0) {
            break;
        }
        hi = lo;
        if lo < 1e-300 {
            return Err(Error::NotBracketable("modular stays below 1 as lambda -> 0".into()));
        }
    }
    for _ in 0..MAX_BISECTIONS {
        if (hi - lo) <= tol * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if rho(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Ok(NormResult {
        norm: hi,
        modular_at_norm: rho(hi),
        bracket_width: hi - lo,
        iterations,
    })
}

/// `||tau_h f||_{p(.)}` for each `h` in the schedule.
pub fn translate_norm_limit(
    f: &LineFunction<'_>,
    p: &ExponentProfile,
    h_schedule: &[f64],
    tol: f64,
) -> Result<Vec<NormResult>> {
    h_schedule
        .iter()
        .map(|&h| luxemburg_norm(&f.translated(h), p, tol))
        .collect()
}

/// Empirical log-Holder constant of `p(x) = p0(|x|)` at `x0`:
/// `max_r |p(x0 + r) - p(x0)| * (-log r)` over `radii` in `(0, 1/2)`.
pub fn log_holder_modulus(p: &ExponentProfile, x0: f64, radii: &[f64]) -> f64 {
    let base = p.at(x0);
    radii
        .iter()
        .filter(|&&r| r > 0.0 && r < 0.5)
        .map(|&r| {
            let d = p.at(x0 + r) - base;
            if d == 0.0 {
                0.0
            } else {
                d.abs() * -r.ln()
            }
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gaussian() -> impl Fn(f64) -> f64 + Sync {
        |t: f64| (-PI * t * t).exp()
    }

    #[test]
    fn exponent_bounds() {
        let p = ExponentProfile::parse("2 - 1/(2*(1+t^2))").unwrap();
        assert_eq!(p.p_minus(), 1.5);
        assert!((p.p_plus() - 2.0).abs() < 1e-12);
        assert!((p.p_diamond().unwrap() - 2.0).abs() < 1e-6);
        assert_eq!(p.monotone(), Monotone::Nondecreasing);
        assert!(p.satisfies_hausdorff_young_hypotheses());
        assert!(ExponentProfile::parse("0.5").is_err());
    }

    #[test]
    fn conjugates() {
        let p = ExponentProfile::parse("2 - 1/(2*(1+t^2))").unwrap();
        let q = p.conjugate().unwrap();
        assert!((q.at(0.0) - 3.0).abs() < 1e-12);
        let qi = p.inverted_argument().unwrap().conjugate().unwrap();
        assert!((qi.at(1e-9) - 2.0).abs() < 1e-9);
        let one = ExponentProfile::constant(1.0).unwrap().conjugate().unwrap();
        assert_eq!(one.at(3.0), f64::INFINITY);
        let inf = ExponentProfile::parse("inf").unwrap().conjugate().unwrap();
        assert_eq!(inf.at(3.0), 1.0);
    }

    #[test]
    fn modular_examples() {
        let c = 0.7;
        let ind = move |t: f64| if t <= 1.0 { c } else { 0.0 };
        let f = LineFunction::new(&ind, vec![1.0]);
        let two = ExponentProfile::constant(2.0).unwrap();
        assert!((modular(&f, &two, 1e-12).unwrap() - 2.0 * c * c).abs() < 1e-12);

        let g = gaussian();
        let gf = LineFunction::new(&g, vec![]);
        let m = modular(&gf, &two, 1e-12).unwrap();
        assert!((m - 0.5f64.sqrt()).abs() < 1e-11, "{m}");

        let half = |t: f64| if t <= 1.0 { 0.5 } else { 0.0 };
        let hf = LineFunction::new(&half, vec![1.0]);
        let inf = ExponentProfile::parse("inf").unwrap();
        assert_eq!(modular(&hf, &inf, 1e-12).unwrap(), 0.0);
        let big = |t: f64| if t <= 1.0 { 2.0 } else { 0.0 };
        let bf = LineFunction::new(&big, vec![1.0]);
        assert!(matches!(modular(&bf, &inf, 1e-12), Err(Error::Divergent(_))));
    }

    #[test]
    fn norm_examples() {
        let ind = |t: f64| if t <= 1.0 { 1.0 } else { 0.0 };
        let f = LineFunction::new(&ind, vec![1.0]);
        let two = ExponentProfile::constant(2.0).unwrap();
        let n = luxemburg_norm(&f, &two, 1e-10).unwrap();
        assert!((n.norm - 2f64.sqrt()).abs() < 1e-8);

        let g = gaussian();
        let gf = LineFunction::new(&g, vec![]);
        let n = luxemburg_norm(&gf, &two, 1e-10).unwrap();
        assert!((n.norm - 2f64.powf(-0.25)).abs() < 1e-8, "{n:?}");
        assert!((n.modular_at_norm - 1.0).abs() < 1e-8);

        let zero = |_t: f64| 0.0;
        let z = luxemburg_norm(&LineFunction::new(&zero, vec![]), &two, 1e-10).unwrap();
        assert_eq!(z.norm, 0.0);
    }

    #[test]
    fn homogeneity_with_variable_exponent() {
        let p = ExponentProfile::parse("2 - 1/(2*(1+t^2))").unwrap();
        let g = gaussian();
        let g2 = |t: f64| 2.0 * (-PI * t * t).exp();
        let a = luxemburg_norm(&LineFunction::new(&g, vec![]), &p, 1e-11).unwrap();
        let b = luxemburg_norm(&LineFunction::new(&g2, vec![]), &p, 1e-11).unwrap();
        assert!((b.norm / a.norm - 2.0).abs() < 1e-8);
    }

    #[test]
    fn translation_invariance_for_constant_exponent() {
        let g = gaussian();
        let f = LineFunction::new(&g, vec![]);
        let p = ExponentProfile::constant(1.5).unwrap();
        let norms = translate_norm_limit(&f, &p, &[0.0, 3.0, 50.0], 1e-10).unwrap();
        for n in &norms[1..] {
            assert!((n.norm / norms[0].norm - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn translation_limit_reaches_limit_exponent_norm() {
        let g = gaussian();
        let f = LineFunction::new(&g, vec![]);
        let p = ExponentProfile::parse("2 - 1/(2*(1+t^2))").unwrap();
        let n = translate_norm_limit(&f, &p, &[0.0, 100.0], 1e-10).unwrap();
        let direct = luxemburg_norm(&f, &p, 1e-10).unwrap();
        assert_eq!(n[0].norm, direct.norm);
        assert!((n[1].norm - 2f64.powf(-0.25)).abs() < 1e-3);
    }

    #[test]
    fn log_holder_examples() {
        let radii = log_grid(1e-12, 0.4, 60);
        let c = ExponentProfile::constant(2.0).unwrap();
        assert_eq!(log_holder_modulus(&c, 0.3, &radii), 0.0);

        let p = ExponentProfile::parse("2 - 1/(2*(1+t^2))").unwrap();
        let m = log_holder_modulus(&p, 0.0, &radii);
        // |p(r) - p(0)| <= r^2 / 2, so the product stays below max r^2 (-log r) / 2.
        assert!(m.is_finite() && m < 0.1, "{m}");

        let step = ExponentProfile::parse("piece(1, 1.5, 2)").unwrap();
        let coarse = log_holder_modulus(&step, 1.0, &log_grid(1e-3, 0.4, 20));
        let fine = log_holder_modulus(&step, 1.0, &log_grid(1e-12, 0.4, 60));
        assert!((coarse - 0.5 * 1e3f64.ln()).abs() < 1e-9);
        assert!(fine > 3.5 * coarse);
    }
}
