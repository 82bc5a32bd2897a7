//! Expression language for scalar functions on `(0, inf)`.
//!
//! The grammar has one free variable `t`, nonnegative literals (with optional
//! exponent part), the operators `+ - * / ^`, unary minus, the functions
//! `exp log sin cos sqrt abs min max`, the piecewise construct
//! `piece(threshold, left, right)` (left branch for `t <= threshold`), the closed
//! indicator `chi(a, b)` and the literal `inf`.
//!
//! Precedence from loosest to tightest: `+ -`, `* /`, unary `-`, `^`.
//! `^` is right-associative and its exponent may carry a unary minus, so
//! `t^-2^2` parses as `t^(-(2^2))`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
    Abs,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Lit(f64),
    Inf,
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
    Min(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
    /// `piece(threshold, left, right)`: `left` for `t <= threshold`.
    Piece(Box<Expr>, Box<Expr>, Box<Expr>),
    /// Indicator of the closed interval `[a, b]`.
    Chi(Box<Expr>, Box<Expr>),
}

fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn checked(v: f64, what: &str) -> Result<f64> {
    if v.is_nan() {
        Err(domain(format!("{what} is undefined")))
    } else {
        Ok(v)
    }
}

impl Expr {
    /// Evaluates the expression at `t`.
    ///
    /// Never returns NaN: undefined operations (`log` of a nonpositive number,
    /// `0^negative`, `inf - inf`, ...) are reported as [`Error::Domain`].
    pub fn eval(&self, t: f64) -> Result<f64> {
        match self {
            Expr::Lit(v) => Ok(*v),
            Expr::Inf => Ok(f64::INFINITY),
            Expr::Var => Ok(t),
            Expr::Neg(a) => Ok(-a.eval(t)?),
            Expr::Add(a, b) => checked(a.eval(t)? + b.eval(t)?, "sum"),
            Expr::Sub(a, b) => checked(a.eval(t)? - b.eval(t)?, "difference"),
            Expr::Mul(a, b) => checked(a.eval(t)? * b.eval(t)?, "product"),
            Expr::Div(a, b) => {
                let num = a.eval(t)?;
                let den = b.eval(t)?;
                if den == 0.0 {
                    if num == 0.0 {
                        return Err(domain("0/0"));
                    }
                    return Ok(if num > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY });
                }
                checked(num / den, "quotient")
            }
            Expr::Pow(a, b) => {
                let base = a.eval(t)?;
                let exp = b.eval(t)?;
                if base == 0.0 && exp < 0.0 {
                    return Err(domain(format!("0^{exp} at t = {t}")));
                }
                checked(base.powf(exp), "power")
            }
            Expr::Call(f, a) => {
                let x = a.eval(t)?;
                match f {
                    Func::Exp => Ok(x.exp()),
                    Func::Log => {
                        if x <= 0.0 {
                            Err(domain(format!("log({x}) at t = {t}")))
                        } else {
                            Ok(x.ln())
                        }
                    }
                    Func::Sin => checked(x.sin(), "sin"),
                    Func::Cos => checked(x.cos(), "cos"),
                    Func::Sqrt => {
                        if x < 0.0 {
                            Err(domain(format!("sqrt({x}) at t = {t}")))
                        } else {
                            Ok(x.sqrt())
                        }
                    }
                    Func::Abs => Ok(x.abs()),
                }
            }
            Expr::Min(a, b) => Ok(a.eval(t)?.min(b.eval(t)?)),
            Expr::Max(a, b) => Ok(a.eval(t)?.max(b.eval(t)?)),
            Expr::Piece(th, l, r) => {
                if t <= th.eval(t)? {
                    l.eval(t)
                } else {
                    r.eval(t)
                }
            }
            Expr::Chi(a, b) => {
                let lo = a.eval(t)?;
                let hi = b.eval(t)?;
                Ok(if t >= lo && t <= hi { 1.0 } else { 0.0 })
            }
        }
    }

    fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Lit(_) | Expr::Inf | Expr::Var => vec![],
            Expr::Neg(a) | Expr::Call(_, a) => vec![a],
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b)
            | Expr::Min(a, b)
            | Expr::Max(a, b)
            | Expr::Chi(a, b) => vec![a, b],
            Expr::Piece(a, b, c) => vec![a, b, c],
        }
    }

    pub fn contains_var(&self) -> bool {
        matches!(self, Expr::Var) || self.children().into_iter().any(Expr::contains_var)
    }

    pub fn contains_inf(&self) -> bool {
        matches!(self, Expr::Inf) || self.children().into_iter().any(Expr::contains_inf)
    }

    fn constant_value(&self) -> Option<f64> {
        if self.contains_var() {
            None
        } else {
            self.eval(1.0).ok().filter(|v| v.is_finite())
        }
    }

    /// Constant breakpoints where the expression may be discontinuous
    /// (indicator endpoints and piecewise thresholds), sorted and deduplicated.
    pub fn knots(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_knots(&mut out);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    fn collect_knots(&self, out: &mut Vec<f64>) {
        match self {
            Expr::Chi(a, b) => {
                out.extend(a.constant_value());
                out.extend(b.constant_value());
            }
            Expr::Piece(th, _, _) => out.extend(th.constant_value()),
            _ => {}
        }
        for c in self.children() {
            c.collect_knots(out);
        }
    }

    /// An upper bound on the support, when one follows syntactically
    /// (a `chi` factor, a zero literal, ...).
    pub fn support_bound(&self) -> Option<f64> {
        match self {
            Expr::Lit(v) if *v == 0.0 => Some(0.0),
            Expr::Chi(_, b) => b.constant_value(),
            Expr::Neg(a) => a.support_bound(),
            Expr::Mul(a, b) => match (a.support_bound(), b.support_bound()) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            },
            Expr::Div(a, _) => a.support_bound(),
            Expr::Add(a, b) | Expr::Sub(a, b) => Some(a.support_bound()?.max(b.support_bound()?)),
            Expr::Pow(a, b) => {
                let e = b.constant_value()?;
                if e > 0.0 {
                    a.support_bound()
                } else {
                    None
                }
            }
            Expr::Call(Func::Abs | Func::Sin | Func::Sqrt, a) => a.support_bound(),
            Expr::Piece(th, l, r) => {
                let th = th.constant_value()?;
                if r.support_bound() == Some(0.0) || r.support_bound().is_some_and(|b| b <= th) {
                    Some(match l.support_bound() {
                        Some(b) => b.min(th),
                        None => th,
                    })
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Replaces every occurrence of `t` by `replacement`.
    pub fn substitute(&self, replacement: &Expr) -> Expr {
        let s = |e: &Expr| Box::new(e.substitute(replacement));
        match self {
            Expr::Var => replacement.clone(),
            Expr::Lit(_) | Expr::Inf => self.clone(),
            Expr::Neg(a) => Expr::Neg(s(a)),
            Expr::Add(a, b) => Expr::Add(s(a), s(b)),
            Expr::Sub(a, b) => Expr::Sub(s(a), s(b)),
            Expr::Mul(a, b) => Expr::Mul(s(a), s(b)),
            Expr::Div(a, b) => Expr::Div(s(a), s(b)),
            Expr::Pow(a, b) => Expr::Pow(s(a), s(b)),
            Expr::Call(f, a) => Expr::Call(*f, s(a)),
            Expr::Min(a, b) => Expr::Min(s(a), s(b)),
            Expr::Max(a, b) => Expr::Max(s(a), s(b)),
            Expr::Piece(a, b, c) => Expr::Piece(s(a), s(b), s(c)),
            Expr::Chi(a, b) => Expr::Chi(s(a), s(b)),
        }
    }
}

fn write_lit(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    if v.is_infinite() {
        return if v > 0.0 { write!(f, "inf") } else { write!(f, "(-inf)") };
    }
    if v.is_sign_negative() {
        write!(f, "(-{:?})", -v)
    } else {
        write!(f, "{v:?}")
    }
}

/// Fully parenthesized rendering; `parse(e.to_string())` reproduces `e`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Lit(v) => write_lit(f, *v),
            Expr::Inf => write!(f, "inf"),
            Expr::Var => write!(f, "t"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Min(a, b) => write!(f, "min({a}, {b})"),
            Expr::Max(a, b) => write!(f, "max({a}, {b})"),
            Expr::Piece(a, b, c) => write!(f, "piece({a}, {b}, {c})"),
            Expr::Chi(a, b) => write!(f, "chi({a}, {b})"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T> {
        Err(Error::Syntax {
            offset: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&[&format!("'{}'", c as char)])
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let s = self.src;
        let digits = |p: &mut usize| {
            let b = *p;
            while *p < s.len() && s[*p].is_ascii_digit() {
                *p += 1;
            }
            *p > b
        };
        let mut p = self.pos;
        let int = digits(&mut p);
        let mut frac = false;
        if p < s.len() && s[p] == b'.' {
            p += 1;
            frac = digits(&mut p);
        }
        if !int && !frac {
            return self.fail(&["number"]);
        }
        if p < s.len() && (s[p] == b'e' || s[p] == b'E') {
            let mut q = p + 1;
            if q < s.len() && (s[q] == b'+' || s[q] == b'-') {
                q += 1;
            }
            if digits(&mut q) {
                p = q;
            }
        }
        let text = std::str::from_utf8(&s[start..p]).expect("ascii slice");
        let v: f64 = text.parse().map_err(|_| Error::Syntax {
            offset: start,
            expected: vec!["number".into()],
        })?;
        self.pos = p;
        Ok(if v.is_infinite() { Expr::Inf } else { Expr::Lit(v) })
    }

    fn args(&mut self, n: usize) -> Result<Vec<Expr>> {
        self.expect(b'(')?;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            if i > 0 {
                self.expect(b',')?;
            }
            out.push(self.expr()?);
        }
        self.expect(b')')?;
        Ok(out)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match name {
                    "t" => Ok(Expr::Var),
                    "inf" => Ok(Expr::Inf),
                    "min" | "max" | "chi" => {
                        let mut a = self.args(2)?.into_iter();
                        let (x, y) = (Box::new(a.next().unwrap()), Box::new(a.next().unwrap()));
                        Ok(match name {
                            "min" => Expr::Min(x, y),
                            "max" => Expr::Max(x, y),
                            _ => Expr::Chi(x, y),
                        })
                    }
                    "piece" => {
                        let mut a = self.args(3)?.into_iter().map(Box::new);
                        Ok(Expr::Piece(a.next().unwrap(), a.next().unwrap(), a.next().unwrap()))
                    }
                    _ => match Func::from_name(name) {
                        Some(func) => {
                            let mut a = self.args(1)?;
                            Ok(Expr::Call(func, Box::new(a.remove(0))))
                        }
                        None => Err(Error::UnknownIdentifier(name.to_string())),
                    },
                }
            }
            _ => self.fail(&["number", "t", "inf", "function", "'('", "'-'"]),
        }
    }
}

/// Parses an expression. Whitespace is insignificant.
pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    if p.peek().is_none() {
        return p.fail(&["expression"]);
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.fail(&["operator", "end of input"]);
    }
    Ok(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prop {
    Nonincreasing,
    Nondecreasing,
    Positive,
    LimitZeroAtInfinity,
}

/// A parsed function of `t` together with properties the caller claims for it.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarFn {
    expr: Expr,
    source: String,
    props: BTreeSet<Prop>,
}

impl ScalarFn {
    pub fn parse(src: &str) -> Result<Self> {
        Ok(ScalarFn {
            expr: parse(src)?,
            source: src.trim().to_string(),
            props: BTreeSet::new(),
        })
    }

    pub fn from_expr(expr: Expr) -> Self {
        ScalarFn {
            source: expr.to_string(),
            expr,
            props: BTreeSet::new(),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_expr(Expr::Lit(c))
    }

    pub fn with_props(mut self, props: impl IntoIterator<Item = Prop>) -> Self {
        self.props.extend(props);
        self
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn props(&self) -> &BTreeSet<Prop> {
        &self.props
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.expr.eval(t)
    }

    /// Evaluation for numerical kernels: domain errors become NaN, which the
    /// quadrature routines report as non-convergence.
    pub fn value(&self, t: f64) -> f64 {
        self.expr.eval(t).unwrap_or(f64::NAN)
    }

    pub fn knots(&self) -> Vec<f64> {
        self.expr.knots()
    }

    pub fn support_bound(&self) -> Option<f64> {
        self.expr.support_bound()
    }

    /// Weights and radial profiles may not use the `inf` literal.
    pub fn require_finite_literals(&self, role: &str) -> Result<()> {
        if self.expr.contains_inf() {
            Err(Error::InvalidInput(format!(
                "{role} `{}` may not contain `inf`",
                self.source
            )))
        } else {
            Ok(())
        }
    }

    /// Spot-checks the declared properties on `grid` (assumed increasing).
    pub fn validate_props(&self, grid: &[f64]) -> Vec<Violation> {
        validate_samples(
            &self.props,
            grid,
            &grid.iter().map(|&t| self.eval(t)).collect::<Vec<_>>(),
        )
    }
}

impl fmt::Display for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub prop: Prop,
    /// Grid interval `[left, right]` (or a single point for positivity) where
    /// the property fails.
    pub left: f64,
    pub right: f64,
    pub detail: String,
}

/// Checks `props` against sampled values. Shared with callers that validate
/// derived functions such as `t^alpha * f0(t)`.
pub fn validate_samples(props: &BTreeSet<Prop>, grid: &[f64], values: &[Result<f64>]) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, v) in values.iter().enumerate() {
        if let Err(e) = v {
            out.push(Violation {
                prop: Prop::Positive,
                left: grid[i],
                right: grid[i],
                detail: e.to_string(),
            });
        }
    }
    if !out.is_empty() {
        return out;
    }
    let vals: Vec<f64> = values.iter().map(|v| *v.as_ref().unwrap()).collect();
    let slack = |a: f64, b: f64| 1e-12 * a.abs().max(b.abs());
    for pair in 0..grid.len().saturating_sub(1) {
        let (a, b) = (vals[pair], vals[pair + 1]);
        if props.contains(&Prop::Nonincreasing) && b > a + slack(a, b) {
            out.push(Violation {
                prop: Prop::Nonincreasing,
                left: grid[pair],
                right: grid[pair + 1],
                detail: format!("{a} < {b}"),
            });
        }
        if props.contains(&Prop::Nondecreasing) && b < a - slack(a, b) {
            out.push(Violation {
                prop: Prop::Nondecreasing,
                left: grid[pair],
                right: grid[pair + 1],
                detail: format!("{a} > {b}"),
            });
        }
    }
    if props.contains(&Prop::Positive) {
        for (i, &v) in vals.iter().enumerate() {
            if v <= 0.0 {
                out.push(Violation {
                    prop: Prop::Positive,
                    left: grid[i],
                    right: grid[i],
                    detail: format!("value {v}"),
                });
            }
        }
    }
    if props.contains(&Prop::LimitZeroAtInfinity) && vals.len() >= 2 {
        let (first, last) = (vals[0], vals[vals.len() - 1]);
        if !(last.abs() < 1e-3 * first.abs()) {
            out.push(Violation {
                prop: Prop::LimitZeroAtInfinity,
                left: grid[0],
                right: grid[grid.len() - 1],
                detail: format!("|f(t_max)| = {} vs |f(t_min)| = {}", last.abs(), first.abs()),
            });
        }
    }
    out
}

/// `points` log-spaced samples on `[start, stop]`.
pub fn log_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2 && start > 0.0 && stop > start);
    let (a, b) = (start.ln(), stop.ln());
    (0..points)
        .map(|i| {
            if i == points - 1 {
                stop
            } else {
                (a + (b - a) * i as f64 / (points - 1) as f64).exp()
            }
        })
        .collect()
}
