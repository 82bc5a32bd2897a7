//! Weight conditions for Fourier inequalities on radial functions.
//!
//! All conditions are reduced to radial integrals on `(0, inf)`; the surface
//! measure of the sphere cancels in every ratio and is dropped.
//!
//! A condition is judged from the ratio `LHS(r) / RHS(r)` on a log grid:
//! it fails if an integral diverges or the ratio grows at least tenfold across
//! the outer two decades at either end, holds if the ratio does not grow by
//! more than 5% over the last decade at both ends, and is inconclusive
//! otherwise.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcdsl::{log_grid, Expr, ScalarFn};
use crate::quad::{
    integrate_finite_opts, integrate_from_zero, integrate_from_zero_with_knots, integrate_to_infinity, QuadOptions,
    QuadResult,
};
use crate::varlp::ExponentProfile;

/// A positive weight `v` on `(0, inf)`.
#[derive(Debug, Clone)]
pub struct WeightProfile {
    v: ScalarFn,
    power_law: Option<f64>,
}

impl WeightProfile {
    /// Checks positivity on a log grid and recognizes `c`, `c * t^b` and
    /// `t^b` as power laws.
    pub fn new(v: ScalarFn) -> Result<Self> {
        for t in log_grid(1e-8, 1e8, 161) {
            let x = v.eval(t)?;
            if !(x > 0.0) {
                return Err(Error::InvalidInput(format!("weight `{v}` is not positive at t = {t}")));
            }
        }
        let power_law = detect_power_law(v.expr());
        Ok(WeightProfile { v, power_law })
    }

    pub fn parse(src: &str) -> Result<Self> {
        Self::new(ScalarFn::parse(src)?)
    }

    /// `v(t) = t^beta`.
    pub fn power(beta: f64) -> Self {
        let expr = Expr::Pow(Box::new(Expr::Var), Box::new(Expr::Lit(beta)));
        WeightProfile {
            v: ScalarFn::from_expr(expr),
            power_law: Some(beta),
        }
    }

    pub fn v(&self) -> &ScalarFn {
        &self.v
    }

    pub fn power_law(&self) -> Option<f64> {
        self.power_law
    }

    fn at(&self, t: f64) -> f64 {
        self.v.value(t)
    }
}

fn literal(e: &Expr) -> Option<f64> {
    match e {
        Expr::Lit(x) => Some(*x),
        Expr::Neg(inner) => literal(inner).map(|x| -x),
        _ => None,
    }
}

/// Returns `b` when `e` is `c`, `t`, `t^b`, `c * t^b` or `t^b * c` with `c > 0`.
fn detect_power_law(e: &Expr) -> Option<f64> {
    match e {
        Expr::Lit(c) if *c > 0.0 && c.is_finite() => Some(0.0),
        Expr::Var => Some(1.0),
        Expr::Pow(base, exp) if matches!(**base, Expr::Var) => literal(exp).filter(|b| b.is_finite()),
        Expr::Mul(a, b) => match (literal(a), literal(b)) {
            (Some(c), None) if c > 0.0 => detect_power_law(b),
            (None, Some(c)) if c > 0.0 => detect_power_law(a),
            _ => None,
        },
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    NumericScan,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioPoint {
    pub r: f64,
    pub lhs: f64,
    pub rhs: f64,
}

impl RatioPoint {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub verdict: Verdict,
    pub sup_ratio: f64,
    pub witness_r: f64,
    pub ratio_profile: Vec<RatioPoint>,
    pub method: Method,
    pub detail: String,
    /// The right-hand side is infinite for every `r`, so the inequality holds
    /// trivially. Every nonzero admissible function then has an infinite
    /// weighted norm.
    pub vacuous: bool,
}

/// 241 log-spaced radii on `[1e-4, 1e4]`.
pub fn default_r_grid() -> Vec<f64> {
    log_grid(1e-4, 1e4, 241)
}

fn check_grid(r_grid: &[f64]) -> Result<()> {
    if r_grid.len() < 2 || r_grid.windows(2).any(|w| !(w[1] > w[0])) || !(r_grid[0] > 0.0) {
        return Err(Error::InvalidInput(
            "radius grid must be positive and increasing".into(),
        ));
    }
    let decades = (r_grid[r_grid.len() - 1] / r_grid[0]).log10();
    if decades < 6.0 - 1e-9 {
        return Err(Error::InvalidInput(format!(
            "radius grid spans {decades:.2} decades; at least 6 are needed"
        )));
    }
    Ok(())
}

fn check_alpha(alpha: f64, n: usize) -> Result<()> {
    let lo = (n as f64 - 1.0) / 2.0;
    let hi = n as f64 - 1.0;
    if alpha < lo - 1e-12 || alpha > hi + 1e-12 {
        return Err(Error::InvalidInput(format!("alpha = {alpha} must lie in [{lo}, {hi}]")));
    }
    Ok(())
}

/// Index of the first grid point at least `factor` times `grid[0]`.
fn index_above(grid: &[f64], factor: f64) -> usize {
    let target = grid[0] * factor * (1.0 - 1e-9);
    grid.iter().position(|&r| r >= target).unwrap_or(grid.len() - 1)
}

/// Index of the last grid point at most `grid[last] / factor`.
fn index_below(grid: &[f64], factor: f64) -> usize {
    let target = grid[grid.len() - 1] / factor * (1.0 + 1e-9);
    grid.iter().rposition(|&r| r <= target).unwrap_or(0)
}

fn summarize(profile: Vec<RatioPoint>, method: Method, divergence: Option<String>) -> ConditionReport {
    let grid: Vec<f64> = profile.iter().map(|p| p.r).collect();
    let ratios: Vec<f64> = profile.iter().map(RatioPoint::ratio).collect();
    let (mut sup_ratio, mut witness_r) = (f64::NEG_INFINITY, grid[0]);
    for (&r, &q) in grid.iter().zip(&ratios) {
        let q = if q.is_nan() { f64::INFINITY } else { q };
        if q > sup_ratio {
            sup_ratio = q;
            witness_r = r;
        }
    }
    let (verdict, detail) = if let Some(d) = divergence {
        (Verdict::Fails, d)
    } else if !sup_ratio.is_finite() {
        (Verdict::Fails, format!("ratio is not finite at r = {witness_r}"))
    } else {
        let last = ratios.len() - 1;
        let growth = |a: usize, b: usize| ratios[a] / ratios[b];
        let left2 = growth(0, index_above(&grid, 100.0));
        let right2 = growth(last, index_below(&grid, 100.0));
        let left1 = growth(0, index_above(&grid, 10.0));
        let right1 = growth(last, index_below(&grid, 10.0));
        if left2 >= 10.0 || right2 >= 10.0 {
            (
                Verdict::Fails,
                format!("ratio grows across the outer two decades (left x{left2:.3e}, right x{right2:.3e})"),
            )
        } else if left1 <= 1.05 && right1 <= 1.05 {
            (Verdict::Holds, format!("ratio bounded by {sup_ratio:.6e}"))
        } else {
            (
                Verdict::Inconclusive,
                format!("end trends left x{left1:.4}, right x{right1:.4} over the last decade"),
            )
        }
    };
    ConditionReport {
        verdict,
        sup_ratio,
        witness_r,
        ratio_profile: profile,
        method,
        detail,
        vacuous: false,
    }
}

const SCAN_REL_TOL: f64 = 1e-10;

/// The value of an improper integral, or `None` when it diverged or its error
/// estimate exceeds a tenth of its size (as for logarithmic divergence, which
/// the dyadic rule can only extrapolate).
fn settled(q: &QuadResult) -> Option<f64> {
    if q.diverged() || q.value.is_nan() || (!q.converged && q.abs_error_estimate > 0.1 * q.value.abs()) {
        None
    } else {
        Some(q.value)
    }
}

fn scan_opts() -> QuadOptions {
    QuadOptions::rel(SCAN_REL_TOL, 1e-300)
}

/// `int_r^inf g` for every `r` in the grid, by cumulative sums from the right.
/// `None` if the integral beyond the last radius diverges.
fn tail_integrals(g: &(dyn Fn(f64) -> f64 + Sync), grid: &[f64]) -> Option<Vec<f64>> {
    let last = grid[grid.len() - 1];
    let beyond = settled(&integrate_to_infinity(g, last, &scan_opts()))?;
    let segs: Vec<f64> = grid
        .par_windows(2)
        .map(|w| integrate_finite_opts(g, w[0], w[1], &scan_opts()).value)
        .collect();
    let mut out = vec![0.0; grid.len()];
    out[grid.len() - 1] = beyond;
    for k in (0..segs.len()).rev() {
        out[k] = out[k + 1] + segs[k];
    }
    Some(out)
}

/// `int_0^r g` for every `r` in the grid, by cumulative sums from the left.
/// `None` if the integral below the first radius diverges.
fn head_integrals(g: &(dyn Fn(f64) -> f64 + Sync), grid: &[f64]) -> Option<Vec<f64>> {
    let below = settled(&integrate_from_zero(g, grid[0], &scan_opts()))?;
    let segs: Vec<f64> = grid
        .par_windows(2)
        .map(|w| integrate_finite_opts(g, w[0], w[1], &scan_opts()).value)
        .collect();
    let mut out = vec![below; grid.len()];
    for k in 0..segs.len() {
        out[k + 1] = out[k] + segs[k];
    }
    Some(out)
}

/// Whether `v = t^beta` satisfies the condition: the left-hand side is finite
/// iff `beta < n (p - 1)`, and an infinite right-hand side makes it hold trivially.
pub fn bp_power_holds(beta: f64, p: f64, _alpha: f64, n: usize) -> bool {
    beta < n as f64 * (p - 1.0)
}

/// Whether `int_0^r t^{beta - alpha p + n - 1} dt` is finite: `beta > alpha p - n`.
/// Together with [`bp_power_holds`] this is the range `alpha p - n < beta < n (p - 1)`
/// on which both sides are finite and proportional.
pub fn bp_power_rhs_finite(beta: f64, p: f64, alpha: f64, n: usize) -> bool {
    beta > alpha * p - n as f64
}

/// The condition
///
/// `r^{p(n - alpha)} int_r^inf t^{-np + n - 1} v(t) dt <= C int_0^r v(t) t^{-alpha p + n - 1} dt`
///
/// for all `r > 0`. Power-law weights are decided in closed form.
pub fn check_bp(v: &WeightProfile, p: f64, alpha: f64, n: usize, r_grid: &[f64]) -> Result<ConditionReport> {
    check_grid(r_grid)?;
    check_alpha(alpha, n)?;
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidInput(format!("p = {p} must be a finite number >= 1")));
    }
    match v.power_law {
        Some(beta) => Ok(check_bp_closed_form(beta, p, alpha, n, r_grid)),
        None => check_bp_numeric(v, p, alpha, n, r_grid),
    }
}

fn check_bp_closed_form(beta: f64, p: f64, alpha: f64, n: usize, r_grid: &[f64]) -> ConditionReport {
    let nf = n as f64;
    // LHS = r^{p(n - alpha)} r^{e1 + 1} / -(e1 + 1), RHS = r^{e2 + 1} / (e2 + 1).
    let e1 = -nf * p + nf - 1.0 + beta;
    let e2 = beta - alpha * p + nf - 1.0;
    let profile = r_grid
        .iter()
        .map(|&r| RatioPoint {
            r,
            lhs: if e1 < -1.0 {
                r.powf(p * (nf - alpha) + e1 + 1.0) / -(e1 + 1.0)
            } else {
                f64::INFINITY
            },
            rhs: if e2 > -1.0 {
                r.powf(e2 + 1.0) / (e2 + 1.0)
            } else {
                f64::INFINITY
            },
        })
        .collect();
    let holds = bp_power_holds(beta, p, alpha, n);
    let vacuous = !bp_power_rhs_finite(beta, p, alpha, n);
    let mut report = summarize(profile, Method::ClosedForm, None);
    report.verdict = if holds { Verdict::Holds } else { Verdict::Fails };
    report.vacuous = holds && vacuous;
    report.detail = if report.vacuous {
        format!(
            "v = t^{beta}: beta <= {} makes the right-hand side infinite; holds trivially",
            alpha * p - nf
        )
    } else {
        format!(
            "v = t^{beta}: both sides finite iff {} < beta < {}",
            alpha * p - nf,
            nf * (p - 1.0)
        )
    };
    if !holds {
        report.sup_ratio = f64::INFINITY;
    } else if report.vacuous {
        report.sup_ratio = 0.0;
    }
    report
}

/// [`check_bp`] by numeric scan, also for power-law weights.
pub fn check_bp_numeric(v: &WeightProfile, p: f64, alpha: f64, n: usize, r_grid: &[f64]) -> Result<ConditionReport> {
    check_grid(r_grid)?;
    let nf = n as f64;
    let w = |t: f64| t.powf(-nf * p + nf - 1.0) * v.at(t);
    let eta = |t: f64| v.at(t) * t.powf(-alpha * p + nf - 1.0);
    let Some(rhs) = head_integrals(&eta, r_grid) else {
        return Ok(vacuous_report(
            r_grid,
            Method::NumericScan,
            "right-hand side diverges at the origin",
        ));
    };
    let Some(tail) = tail_integrals(&w, r_grid) else {
        return Ok(divergent_report(
            r_grid,
            Method::NumericScan,
            "left-hand side diverges at infinity",
        ));
    };
    let profile = r_grid
        .iter()
        .zip(rhs.iter().zip(&tail))
        .map(|(&r, (&rhs, &t))| RatioPoint {
            r,
            lhs: r.powf(p * (nf - alpha)) * t,
            rhs,
        })
        .collect();
    Ok(summarize(profile, Method::NumericScan, None))
}

/// Holds trivially: the right-hand side is infinite at every radius.
fn vacuous_report(r_grid: &[f64], method: Method, what: &str) -> ConditionReport {
    ConditionReport {
        verdict: Verdict::Holds,
        sup_ratio: 0.0,
        witness_r: r_grid[0],
        ratio_profile: Vec::new(),
        method,
        detail: format!("{what}; holds trivially"),
        vacuous: true,
    }
}

fn divergent_report(r_grid: &[f64], method: Method, what: &str) -> ConditionReport {
    let profile = r_grid
        .iter()
        .map(|&r| RatioPoint {
            r,
            lhs: f64::INFINITY,
            rhs: f64::INFINITY,
        })
        .collect();
    summarize(profile, method, Some(what.to_string()))
}

/// The variable-exponent condition
///
/// `int_{t >= r} r^{p(1/t)} t^{-n p(1/t)} v(t) t^{n-1} dt <= C int_0^r v(t) t^{(1-n) p(1/t) + n - 1} dt`
///
/// for all `r > 0`, by numeric scan.
pub fn check_21(v: &WeightProfile, p: &ExponentProfile, n: usize, r_grid: &[f64]) -> Result<ConditionReport> {
    check_grid(r_grid)?;
    if !p.p_plus().is_finite() {
        return Err(Error::InvalidInput("the exponent must be bounded".into()));
    }
    let nf = n as f64;
    let q = |t: f64| p.at(1.0 / t);
    let eta = |t: f64| v.at(t) * t.powf((1.0 - nf) * q(t) + nf - 1.0);
    let Some(rhs) = head_integrals(&eta, r_grid) else {
        return Ok(vacuous_report(
            r_grid,
            Method::NumericScan,
            "right-hand side diverges at the origin",
        ));
    };
    let lhs: Vec<f64> = r_grid
        .par_iter()
        .map(|&r| {
            let g = |t: f64| (q(t) * (r.ln() - nf * t.ln())).exp() * t.powf(nf - 1.0) * v.at(t);
            settled(&integrate_to_infinity(&g, r, &scan_opts())).unwrap_or(f64::INFINITY)
        })
        .collect();
    if lhs.iter().any(|x| x.is_infinite()) {
        return Ok(divergent_report(
            r_grid,
            Method::NumericScan,
            "left-hand side diverges at infinity",
        ));
    }
    let profile = r_grid
        .iter()
        .zip(lhs.iter().zip(&rhs))
        .map(|(&r, (&lhs, &rhs))| RatioPoint { r, lhs, rhs })
        .collect();
    Ok(summarize(profile, Method::NumericScan, None))
}

/// `H g (x) = (1/x) int_0^x g`.
pub fn hardy_operator(g: &ScalarFn, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidInput(format!("x = {x} must be positive")));
    }
    let f = |t: f64| g.value(t);
    let q = integrate_from_zero_with_knots(&f, x, &g.knots(), &QuadOptions::rel(1e-12, 1e-15))?;
    Ok(q.value / x)
}

/// Piecewise power-law interpolation of a positive increasing function
/// tabulated on a log grid, extended by power laws at both ends.
struct LogLogTable {
    log_t: Vec<f64>,
    log_y: Vec<f64>,
}

impl LogLogTable {
    fn eval_ln(&self, t: f64) -> f64 {
        let x = t.ln();
        let n = self.log_t.len();
        let k = match self.log_t.partition_point(|&a| a <= x) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let s = (self.log_y[k + 1] - self.log_y[k]) / (self.log_t[k + 1] - self.log_t[k]);
        self.log_y[k] + s * (x - self.log_t[k])
    }
}

/// The two conditions of the weighted Hardy inequality with
/// `w(t) = t^{-np + p + n - 1} v(t)`, `eta(t) = t^{-alpha p + n - 1} v(t)`, `u(t) = t^{n - 1 - alpha}`,
/// `U(t) = int_0^t u` and `D(t) = int_0^t eta`:
///
/// * A: `int_0^r U^p w t^{-p} dt <= C int_0^r eta`;
/// * B: `(int_r^inf w t^{-p})^{1/p} (int_0^r eta (U / D)^{p'})^{1/p'} <= C`.
///
/// In the report for B the right-hand side column is identically 1.
pub fn check_hardy_conditions(
    v: &WeightProfile,
    p: f64,
    alpha: f64,
    n: usize,
    r_grid: &[f64],
) -> Result<(ConditionReport, ConditionReport)> {
    check_grid(r_grid)?;
    check_alpha(alpha, n)?;
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidInput(format!("p = {p} must be a finite number > 1")));
    }
    let nf = n as f64;
    let pc = p / (p - 1.0);
    let ln_v = |t: f64| v.at(t).ln();
    let ln_u_int = |t: f64| (nf - alpha) * t.ln() - (nf - alpha).ln();
    let ln_eta = |t: f64| ln_v(t) + (-alpha * p + nf - 1.0) * t.ln();
    let w_tp = |t: f64| (ln_v(t) + (-nf * p + nf - 1.0) * t.ln()).exp();

    // Condition A.
    let a_lhs_int = |t: f64| (p * ln_u_int(t) + ln_v(t) + (-nf * p + nf - 1.0) * t.ln()).exp();
    let eta = |t: f64| ln_eta(t).exp();
    let d_grid = table_grid(r_grid);
    let Some(d_vals) = head_integrals(&eta, &d_grid) else {
        let div = "the eta integral diverges at the origin";
        return Ok((
            vacuous_report(r_grid, Method::NumericScan, div),
            vacuous_report(r_grid, Method::NumericScan, div),
        ));
    };
    let report_a = match head_integrals(&a_lhs_int, r_grid) {
        None => divergent_report(
            r_grid,
            Method::NumericScan,
            "left-hand side of A diverges at the origin",
        ),
        Some(lhs) => {
            let rhs: Vec<f64> = r_grid.iter().map(|&r| sample_table(&d_grid, &d_vals, r)).collect();
            let profile = r_grid
                .iter()
                .zip(lhs.iter().zip(&rhs))
                .map(|(&r, (&lhs, &rhs))| RatioPoint { r, lhs, rhs })
                .collect();
            summarize(profile, Method::NumericScan, None)
        }
    };

    // Condition B.
    let table = LogLogTable {
        log_t: d_grid.iter().map(|t| t.ln()).collect(),
        log_y: d_vals.iter().map(|y| y.ln()).collect(),
    };
    let inner = |t: f64| (ln_eta(t) + pc * (ln_u_int(t) - table.eval_ln(t))).exp();
    let report_b = match (tail_integrals(&w_tp, r_grid), head_integrals(&inner, r_grid)) {
        (None, _) => divergent_report(r_grid, Method::NumericScan, "tail factor of B diverges at infinity"),
        (_, None) => divergent_report(r_grid, Method::NumericScan, "head factor of B diverges at the origin"),
        (Some(tail), Some(head)) => {
            let profile = r_grid
                .iter()
                .zip(tail.iter().zip(&head))
                .map(|(&r, (&t, &h))| RatioPoint {
                    r,
                    lhs: t.powf(1.0 / p) * h.powf(1.0 / pc),
                    rhs: 1.0,
                })
                .collect();
            summarize(profile, Method::NumericScan, None)
        }
    };
    Ok((report_a, report_b))
}

/// A log grid one decade wider than `r_grid` on each side, ten points per
/// decade denser than needed for power-law interpolation.
fn table_grid(r_grid: &[f64]) -> Vec<f64> {
    let lo = r_grid[0] / 10.0;
    let hi = r_grid[r_grid.len() - 1] * 10.0;
    let decades = (hi / lo).log10();
    log_grid(lo, hi, (decades * 40.0).ceil() as usize + 1)
}

fn sample_table(grid: &[f64], vals: &[f64], r: f64) -> f64 {
    let table = LogLogTable {
        log_t: grid.iter().map(|t| t.ln()).collect(),
        log_y: vals.iter().map(|y| y.ln()).collect(),
    };
    table.eval_ln(r).exp()
}
