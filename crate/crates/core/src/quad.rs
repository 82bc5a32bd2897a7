//! Numerical integration.
//!
//! - [`integrate_finite`]: globally adaptive Gauss-Kronrod (7/15) on a finite
//!   interval. The initial mesh is graded geometrically toward both endpoints
//!   so integrable endpoint singularities of type `r^{-s}`, `s < 1`, are
//!   resolved by further bisection. The per-panel error estimate is the raw
//!   difference between the Kronrod and the embedded Gauss rule.
//! - [`integrate_to_infinity`] / [`integrate_from_zero`]: sums over dyadic
//!   panels `[a 2^k, a 2^{k+1}]` (or `[b 2^{-k-1}, b 2^{-k}]`). Once the panel
//!   contributions become geometric the remainder is summed in closed form, so
//!   power-law tails are exact and divergent power laws are detected.
//! - [`integrate_oscillatory`]: `int_0^inf g(r) J_nu(s r) dr` as the limit of
//!   integrals over the intervals between consecutive zeros of `J_nu(s r)`,
//!   with iterated averaging of the alternating partial sums.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::bessel::{cached_zeros, BesselOrder};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub panels_used: usize,
    pub tail_terms_used: usize,
    pub converged: bool,
}

impl QuadResult {
    fn zero() -> Self {
        QuadResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            panels_used: 0,
            tail_terms_used: 0,
            converged: true,
        }
    }

    pub fn diverged(&self) -> bool {
        self.value.is_infinite()
    }

    /// Turns a non-converged result into [`Error::NonConvergence`].
    pub fn require_converged(self, what: &str) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else if self.diverged() {
            Err(Error::Divergent(what.to_string()))
        } else {
            Err(Error::NonConvergence(format!(
                "{what}: value {} with error estimate {}",
                self.value, self.abs_error_estimate
            )))
        }
    }
}

#[derive(Debug, Clone)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    /// Mandatory panel boundaries (discontinuities of the integrand).
    pub breaks: Vec<f64>,
}

impl QuadOptions {
    pub fn abs(tol: f64) -> Self {
        QuadOptions {
            abs_tol: tol,
            rel_tol: 0.0,
            max_panels: 4000,
            breaks: Vec::new(),
        }
    }

    pub fn rel(rel_tol: f64, abs_tol: f64) -> Self {
        QuadOptions {
            rel_tol,
            ..Self::abs(abs_tol)
        }
    }

    pub fn with_breaks(mut self, breaks: &[f64]) -> Self {
        self.breaks = breaks.to_vec();
        self
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
/// Interpolatory rule (degree 7) on the eight Kronrod-only nodes
/// `±XGK[0], ±XGK[2], ±XGK[4], ±XGK[6]`: a second null rule for the estimate.
const WR8: [f64; 4] = [
    0.043_787_914_992_234_056,
    0.209_136_164_496_176_06,
    0.338_314_908_133_115_16,
    0.408_761_012_378_474_73,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod 7/15 panel: (Kronrod value, error estimate).
///
/// The estimate takes the larger of two null rules, Kronrod minus Gauss and
/// Kronrod minus the eight-node rule, each scaled against the spread of `f`
/// about its mean. A single difference can vanish by accident on a panel
/// holding a cusp.
fn gk15<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut r8 = 0.0;
    let mut pairs = [(0.0, 0.0); 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        pairs[j] = (f(c - dx), f(c + dx));
        let s = pairs[j].0 + pairs[j].1;
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        } else {
            r8 += WR8[j / 2] * s;
        }
    }
    let k = kron * h;
    if !k.is_finite() {
        return (k, f64::INFINITY);
    }
    let mean = 0.5 * kron;
    let mut asc = WGK[7] * (fc - mean).abs();
    for (w, (lo, hi)) in WGK.iter().zip(pairs) {
        asc += w * ((lo - mean).abs() + (hi - mean).abs());
    }
    asc *= h.abs();
    // QUADPACK's scaling; only the Gauss difference keeps its raw value as a
    // floor, since the eight-node rule is of much lower degree.
    let scaled = |diff: f64| {
        if asc > 0.0 {
            asc * (200.0 * diff / asc).powf(1.5).min(1.0)
        } else {
            diff
        }
    };
    let diff = (k - gauss * h).abs();
    let err = diff.max(scaled(diff)).max(scaled((k - r8 * h).abs()));
    (k, err)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |p: &Panel| if p.err.is_nan() { f64::INFINITY } else { p.err };
        key(self).total_cmp(&key(other))
    }
}

fn initial_mesh(a: f64, b: f64, breaks: &[f64]) -> Vec<f64> {
    const GRADE: f64 = 0.2;
    const LEVELS: i32 = 6;
    let mut pts = vec![a, b];
    pts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    let w = b - a;
    for k in 1..=LEVELS {
        let d = w * GRADE.powi(k);
        pts.push(a + d);
        pts.push(b - d);
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * (1.0 + y.abs()));
    pts
}

/// `int_a^b f` to absolute tolerance `tol`.
pub fn integrate_finite<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64, tol: f64) -> QuadResult {
    integrate_finite_opts(f, a, b, &QuadOptions::abs(tol))
}

pub fn integrate_finite_opts<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64, opts: &QuadOptions) -> QuadResult {
    if a == b {
        return QuadResult::zero();
    }
    if a > b {
        let mut r = integrate_finite_opts(f, b, a, opts);
        r.value = -r.value;
        return r;
    }
    let mesh = initial_mesh(a, b, &opts.breaks);
    let mut heap = BinaryHeap::new();
    let mut done = Vec::new();
    let mut value = 0.0f64;
    let mut err = 0.0f64;
    for w in mesh.windows(2) {
        let (v, e) = gk15(f, w[0], w[1]);
        value += v;
        err += e;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value: v,
            err: e,
        });
    }
    let mut panels = heap.len();
    while err > opts.target(value) && panels < opts.max_panels {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || !worst.err.is_finite() && worst.b - worst.a < 1e-300 {
            done.push(worst);
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
        });
        panels += 1;
        value += v1 + v2 - worst.value;
        err += e1 + e2 - worst.err;
        // Periodic resummation guards against drift and inf - inf.
        if panels % 64 == 0 || !value.is_finite() || !err.is_finite() || err <= opts.target(value) {
            value = 0.0;
            err = 0.0;
            for p in heap.iter().chain(done.iter()) {
                value += p.value;
                err += p.err;
            }
        }
    }
    let converged = err.is_finite() && value.is_finite() && err <= opts.target(value);
    QuadResult {
        value,
        abs_error_estimate: err,
        panels_used: panels,
        tail_terms_used: 0,
        converged,
    }
}

#[derive(Debug, Clone, Copy)]
enum Direction {
    Outward,
    Inward,
}

/// Maximum number of dyadic panels before the tail is extrapolated.
pub const MAX_DYADIC_PANELS: usize = 160;

fn dyadic<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    start: f64,
    dir: Direction,
    opts: &QuadOptions,
    max_panels: usize,
) -> QuadResult {
    assert!(start > 0.0, "dyadic integration needs a positive start");
    let mut sum = 0.0f64;
    let mut err = 0.0f64;
    let mut panels = 0;
    let mut contribs: Vec<f64> = Vec::new();
    let mut zero_run = 0;
    let inner = QuadOptions {
        abs_tol: opts.abs_tol * 1e-2,
        rel_tol: opts.rel_tol * 1e-2,
        ..opts.clone()
    };
    let mut lo;
    let mut hi;
    match dir {
        Direction::Outward => {
            lo = start;
            hi = 2.0 * start;
        }
        Direction::Inward => {
            lo = 0.5 * start;
            hi = start;
        }
    }
    for k in 0..max_panels {
        let mut local = inner.clone();
        local.abs_tol = inner.abs_tol.max(inner.rel_tol * sum.abs());
        let r = integrate_finite_opts(f, lo, hi, &local);
        panels += r.panels_used;
        if !r.value.is_finite() {
            return QuadResult {
                value: if r.value.is_nan() { f64::NAN } else { f64::INFINITY },
                abs_error_estimate: f64::INFINITY,
                panels_used: panels,
                tail_terms_used: k + 1,
                converged: false,
            };
        }
        sum += r.value;
        err += r.abs_error_estimate;
        contribs.push(r.value);
        let c = r.value;
        let terms = k + 1;
        let done = |sum: f64, err: f64, converged: bool| QuadResult {
            value: sum,
            abs_error_estimate: err,
            panels_used: panels,
            tail_terms_used: terms,
            converged,
        };
        if c == 0.0 {
            zero_run += 1;
            if zero_run >= 3 && k >= 3 {
                return done(sum, err, true);
            }
        } else {
            zero_run = 0;
        }
        if k >= 3 {
            let n = contribs.len();
            let c1 = contribs[n - 2];
            let c2 = contribs[n - 3];
            let c3 = contribs[n - 4];
            let small = c.abs() <= opts.target(sum) * 1e-3;
            if small && c.abs() < c1.abs() && c1.abs() < c2.abs() {
                return done(sum, err + c.abs(), true);
            }
            let same_sign =
                c != 0.0 && c.signum() == c1.signum() && c1.signum() == c2.signum() && c2.signum() == c3.signum();
            if same_sign {
                let r0 = c / c1;
                let r1 = c1 / c2;
                let r2 = c2 / c3;
                let agree = |x: f64, y: f64| (x - y).abs() <= 1e-8 * x.abs().max(y.abs());
                if agree(r0, r1) && agree(r1, r2) {
                    if r0 >= 1.0 - 1e-9 {
                        return done(f64::INFINITY, f64::INFINITY, false);
                    }
                    let tail = c * r0 / (1.0 - r0);
                    let drift = (r0 - r1).abs() + (r1 - r2).abs();
                    let tail_err = tail.abs() * (drift / (1.0 - r0) + 1e-14) + err;
                    return done(sum + tail, tail_err, tail_err <= opts.target(sum + tail).max(err));
                }
            }
        }
        match dir {
            Direction::Outward => {
                lo = hi;
                hi *= 2.0;
            }
            Direction::Inward => {
                hi = lo;
                lo *= 0.5;
            }
        }
    }
    // Panel budget exhausted: extrapolate with the last ratio when it is
    // clearly contracting, otherwise report divergence.
    let n = contribs.len();
    if n >= 2 && contribs[n - 2] != 0.0 {
        let ratio = contribs[n - 1] / contribs[n - 2];
        if ratio >= 1.0 {
            return QuadResult {
                value: f64::INFINITY,
                abs_error_estimate: f64::INFINITY,
                panels_used: panels,
                tail_terms_used: n,
                converged: false,
            };
        }
        if ratio > 0.0 {
            let tail = contribs[n - 1] * ratio / (1.0 - ratio);
            return QuadResult {
                value: sum + tail,
                abs_error_estimate: err + tail.abs(),
                panels_used: panels,
                tail_terms_used: n,
                converged: tail.abs() + err <= opts.target(sum + tail),
            };
        }
    }
    QuadResult {
        value: sum,
        abs_error_estimate: err,
        panels_used: panels,
        tail_terms_used: n,
        converged: err <= opts.target(sum),
    }
}

/// `int_a^inf f` for `a > 0`. A value of `+inf` signals detected divergence.
pub fn integrate_to_infinity<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, opts: &QuadOptions) -> QuadResult {
    dyadic(f, a, Direction::Outward, opts, MAX_DYADIC_PANELS)
}

/// As [`integrate_to_infinity`] but stops after `max_panels` dyadic panels and
/// extrapolates the remainder geometrically from the last panel ratio.
pub fn integrate_to_infinity_capped<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    opts: &QuadOptions,
    max_panels: usize,
) -> QuadResult {
    dyadic(f, a, Direction::Outward, opts, max_panels)
}

/// `int_0^b f` for `b > 0`. A value of `+inf` signals detected divergence.
pub fn integrate_from_zero<F: Fn(f64) -> f64 + ?Sized>(f: &F, b: f64, opts: &QuadOptions) -> QuadResult {
    dyadic(f, b, Direction::Inward, opts, MAX_DYADIC_PANELS)
}

/// `int_0^inf f`, split at `split > 0`.
pub fn integrate_half_line<F: Fn(f64) -> f64 + ?Sized>(f: &F, split: f64, opts: &QuadOptions) -> QuadResult {
    let a = integrate_from_zero(f, split, opts);
    let b = integrate_to_infinity(f, split, opts);
    QuadResult {
        value: a.value + b.value,
        abs_error_estimate: a.abs_error_estimate + b.abs_error_estimate,
        panels_used: a.panels_used + b.panels_used,
        tail_terms_used: a.tail_terms_used + b.tail_terms_used,
        converged: a.converged && b.converged,
    }
}

/// `int_0^b g` where `g` may be singular at 0 and jumps at `knots`: dyadic
/// refinement below `min(1, first knot)`, a broken finite rule above it.
/// Divergence at the origin is reported as [`Error::Divergent`].
pub fn integrate_from_zero_with_knots(
    g: &dyn Fn(f64) -> f64,
    b: f64,
    knots: &[f64],
    opts: &QuadOptions,
) -> Result<QuadResult> {
    let inner: Vec<f64> = knots.iter().copied().filter(|&k| k > 0.0 && k < b).collect();
    let c = inner.iter().copied().fold(b.min(1.0), f64::min);
    let half = QuadOptions {
        abs_tol: 0.5 * opts.abs_tol,
        rel_tol: 0.5 * opts.rel_tol,
        ..opts.clone()
    };
    let head = integrate_from_zero(g, c, &half);
    if head.diverged() {
        return Err(Error::Divergent(format!(
            "integral diverges at the origin (cut at {c})"
        )));
    }
    let head = head.require_converged("integral near the origin")?;
    if c >= b {
        return Ok(head);
    }
    let rest = integrate_finite_opts(g, c, b, &half.with_breaks(&inner));
    let rest = rest.require_converged("bounded radial integral")?;
    Ok(QuadResult {
        value: head.value + rest.value,
        abs_error_estimate: head.abs_error_estimate + rest.abs_error_estimate,
        panels_used: head.panels_used + rest.panels_used,
        tail_terms_used: 0,
        converged: true,
    })
}

/// Integrand `smooth_part(r) * J_nu(frequency * r)` on `(0, inf)`.
pub struct OscillatoryIntegrand<'a> {
    pub smooth_part: &'a (dyn Fn(f64) -> f64 + Sync),
    pub order: BesselOrder,
    pub frequency: f64,
    /// Discontinuities of `smooth_part`.
    pub knots: Vec<f64>,
    /// `smooth_part` vanishes beyond this point, when known.
    pub support: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct OscillatoryOptions {
    pub tol: f64,
    /// The head interval is `[0, z_m / s]` with `m = head_zeros`.
    pub head_zeros: usize,
    pub max_intervals: usize,
    pub accel_depth: usize,
}

impl OscillatoryOptions {
    pub fn new(tol: f64) -> Self {
        OscillatoryOptions {
            tol,
            head_zeros: 1,
            max_intervals: 512,
            accel_depth: 12,
        }
    }
}

/// Intervals processed without acceleration when the support is bounded.
const MAX_SUPPORTED_INTERVALS: usize = 1 << 20;

/// Iterated pairwise averaging of the last `depth + 1` partial sums.
fn averaged(partials: &[f64], depth: usize) -> f64 {
    let mut level: Vec<f64> = partials[partials.len() - depth - 1..].to_vec();
    while level.len() > 1 {
        level = level.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    level[0]
}

pub fn integrate_oscillatory(g: &OscillatoryIntegrand<'_>, opts: &OscillatoryOptions) -> Result<QuadResult> {
    if !(g.frequency > 0.0) {
        return Err(Error::InvalidInput(format!(
            "frequency {} must be positive",
            g.frequency
        )));
    }
    let s = g.frequency;
    let order = g.order;
    let f = |r: f64| {
        let v = (g.smooth_part)(r);
        if v == 0.0 {
            0.0
        } else {
            v * order.eval(s * r)
        }
    };
    let head_zeros = opts.head_zeros.max(1);
    let mut zeros = cached_zeros(order, head_zeros + 64);
    let mut head_end = zeros[head_zeros - 1] / s;
    if let Some(b) = g.support {
        head_end = head_end.min(b.max(0.0));
    }
    let piece_opts = |tol: f64, a: f64, b: f64| {
        let breaks: Vec<f64> = g.knots.iter().copied().filter(|&x| x > a && x < b).collect();
        QuadOptions::abs(tol).with_breaks(&breaks)
    };
    let mut result = if head_end > 0.0 {
        let h = integrate_finite_opts(&f, 0.0, head_end, &piece_opts(opts.tol * 0.1, 0.0, head_end));
        if !h.converged {
            return Err(Error::NonConvergence(format!(
                "head interval [0, {head_end}]: error estimate {}",
                h.abs_error_estimate
            )));
        }
        h
    } else {
        QuadResult::zero()
    };
    if g.support.is_some_and(|b| b <= head_end) {
        return Ok(result);
    }

    let per_interval = opts.tol * 1e-2;
    let mut partials = vec![result.value];
    let mut k = head_zeros - 1;
    let mut intervals = 0usize;
    loop {
        if zeros.len() < k + 2 {
            zeros = cached_zeros(order, 2 * zeros.len());
        }
        let a = zeros[k] / s;
        let mut b = zeros[k + 1] / s;
        if let Some(sup) = g.support {
            if a >= sup {
                result.converged = true;
                result.tail_terms_used = intervals;
                return Ok(result);
            }
            b = b.min(sup);
        }
        let piece = integrate_finite_opts(&f, a, b, &piece_opts(per_interval, a, b));
        if !piece.value.is_finite() {
            return Err(Error::NonConvergence(format!("interval [{a}, {b}] is not finite")));
        }
        result.value += piece.value;
        result.abs_error_estimate += piece.abs_error_estimate;
        result.panels_used += piece.panels_used;
        intervals += 1;
        k += 1;
        partials.push(result.value);
        if g.support.is_some() {
            if intervals >= MAX_SUPPORTED_INTERVALS {
                return Err(Error::NonConvergence("too many intervals inside the support".into()));
            }
            continue;
        }

        let n = partials.len();
        let last = (partials[n - 1] - partials[n - 2]).abs();
        let prev = if n >= 3 {
            (partials[n - 2] - partials[n - 3]).abs()
        } else {
            last
        };
        if last.max(prev) < 0.1 * opts.tol {
            result.tail_terms_used = intervals;
            result.abs_error_estimate += last.max(prev);
            result.converged = true;
            return Ok(result);
        }
        if n >= opts.accel_depth + 2 {
            let a_now = averaged(&partials, opts.accel_depth);
            let a_prev = averaged(&partials[..n - 1], opts.accel_depth);
            // Also compare against one level less: with fast-decaying terms the
            // stale early partial sums still carry weight and the plain
            // difference cancels.
            let a_shallow = averaged(&partials, opts.accel_depth.saturating_sub(1));
            let tail = (a_now - a_prev).abs().max((a_now - a_shallow).abs());
            if tail < opts.tol {
                result.value = a_now;
                result.abs_error_estimate += tail;
                result.tail_terms_used = intervals;
                result.converged = true;
                return Ok(result);
            }
        }
        if intervals >= opts.max_intervals {
            return Err(Error::NonConvergence(format!(
                "{} zero intervals exhausted without the tail estimate dropping below {}",
                opts.max_intervals, opts.tol
            )));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn singular_endpoint() {
        let r = integrate_finite(&|t: f64| t.powf(-0.5), 0.0, 1.0, 1e-10);
        assert!(r.converged);
        assert!((r.value - 2.0).abs() < 1e-9, "{r:?}");
        assert!(r.abs_error_estimate >= (r.value - 2.0).abs());
    }

    #[test]
    fn polynomial_and_symmetric() {
        let r = integrate_finite(&|t: f64| t * t, 0.0, 1.0, 1e-12);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-14);
        let s = integrate_finite(&|t: f64| t.sin(), 0.0, 2.0 * PI, 1e-12);
        assert!(s.value.abs() < 1e-12);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        assert_eq!(integrate_finite(&|t: f64| t, 1.0, 1.0, 1e-10).value, 0.0);
        let r = integrate_finite(&|t: f64| t, 1.0, 0.0, 1e-12);
        assert!((r.value + 0.5).abs() < 1e-14);
    }

    #[test]
    fn breaks_restore_accuracy_for_jumps() {
        let f = |t: f64| if t <= 0.3 { 1.0 } else { 0.0 };
        let r = integrate_finite_opts(&f, 0.0, 1.0, &QuadOptions::abs(1e-13).with_breaks(&[0.3]));
        assert!((r.value - 0.3).abs() < 1e-13);
        assert!(r.panels_used < 40);
    }

    #[test]
    fn nonconvergence_is_reported() {
        let r = integrate_finite_opts(
            &|t: f64| 1.0 / t,
            0.0,
            1.0,
            &QuadOptions {
                max_panels: 200,
                ..QuadOptions::abs(1e-10)
            },
        );
        assert!(!r.converged);
        let e = r.require_converged("1/t");
        assert!(e.is_err());
    }

    #[test]
    fn power_law_tails_are_exact_or_divergent() {
        let opts = QuadOptions::rel(1e-12, 1e-300);
        let r = integrate_to_infinity(&|t: f64| t.powf(-1.5), 2.0, &opts);
        let exact = 2.0 / 2f64.sqrt();
        assert!((r.value / exact - 1.0).abs() < 1e-9, "{r:?}");
        let d = integrate_to_infinity(&|t: f64| t.powf(-0.95), 1.0, &opts);
        assert!(d.diverged());
        let z = integrate_from_zero(&|t: f64| t.powf(-0.97), 1.0, &opts);
        assert!((z.value / (1.0 / 0.03) - 1.0).abs() < 1e-8, "{z:?}");
        let dz = integrate_from_zero(&|t: f64| t.powf(-1.02), 1.0, &opts);
        assert!(dz.diverged());
    }

    #[test]
    fn gaussian_tail_stops_early() {
        let opts = QuadOptions::rel(1e-12, 1e-300);
        let r = integrate_half_line(&|t: f64| (-PI * t * t).exp(), 1.0, &opts);
        assert!((r.value - 0.5).abs() < 1e-12, "{r:?}");
        assert!(r.converged);
    }

    #[test]
    fn oscillatory_indicator_in_one_dimension() {
        // 2 pi xi^{1/2} int_0^1 r^{1/2} J_{-1/2}(2 pi xi r) dr = sin(2 pi xi)/(pi xi)
        let smooth = |r: f64| if r <= 1.0 { r.sqrt() } else { 0.0 };
        let xi = 1.0;
        let g = OscillatoryIntegrand {
            smooth_part: &smooth,
            order: BesselOrder::new(-0.5).unwrap(),
            frequency: 2.0 * PI * xi,
            knots: vec![1.0],
            support: Some(1.0),
        };
        let r = integrate_oscillatory(&g, &OscillatoryOptions::new(1e-11)).unwrap();
        let v = 2.0 * PI * xi.sqrt() * r.value;
        assert!(v.abs() < 1e-8, "{v}");
    }

    #[test]
    fn oscillatory_gaussian() {
        let smooth = |r: f64| r.sqrt() * (-PI * r * r).exp();
        let g = OscillatoryIntegrand {
            smooth_part: &smooth,
            order: BesselOrder::new(-0.5).unwrap(),
            frequency: 2.0 * PI,
            knots: vec![],
            support: None,
        };
        let r = integrate_oscillatory(&g, &OscillatoryOptions::new(1e-12)).unwrap();
        assert!((2.0 * PI * r.value - (-PI).exp()).abs() < 1e-10);
    }

    #[test]
    fn zero_integrand_converges_after_one_interval() {
        let smooth = |_r: f64| 0.0;
        let g = OscillatoryIntegrand {
            smooth_part: &smooth,
            order: BesselOrder::new(0.0).unwrap(),
            frequency: 1.0,
            knots: vec![],
            support: None,
        };
        let r = integrate_oscillatory(&g, &OscillatoryOptions::new(1e-9)).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.converged);
        assert_eq!(r.tail_terms_used, 1);
    }

    #[test]
    fn slowly_decaying_alternating_tail_is_accelerated() {
        // int_0^inf J_0(r) dr = 1
        let smooth = |_r: f64| 1.0;
        let g = OscillatoryIntegrand {
            smooth_part: &smooth,
            order: BesselOrder::new(0.0).unwrap(),
            frequency: 1.0,
            knots: vec![],
            support: None,
        };
        let r = integrate_oscillatory(&g, &OscillatoryOptions::new(1e-10)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9, "{r:?}");
        assert!(r.tail_terms_used < 200);
    }
}
