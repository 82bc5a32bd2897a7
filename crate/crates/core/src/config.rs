//! Scenario configuration files (TOML or JSON).
//!
//! ```toml
//! version = 1
//!
//! [functions]
//! p = "2 - 1/(2*(1+t^2))"
//! f = "24*exp(-3.141592653589793*t^2)"
//!
//! [[scenarios]]
//! name = "hy-scaling"
//! kind = "hy_scaling"
//! p = "p"
//! q = { conjugate_of = "p" }
//! f = "f"
//! lambda = { start = 1.0, stop = 0.000244140625, points = 13 }
//!
//! [output]
//! path = "out"
//! formats = ["json", "csv"]
//! ```
//!
//! Wherever a function is expected, a string is looked up in `[functions]`
//! first and otherwise parsed as an expression.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::experiments::{Direction, Format, FtBoundParams, HyScalingParams, PittParams, Scenario, TranslationParams};
use crate::funcdsl::ScalarFn;
use crate::hankel::RadialProfile;
use crate::varlp::ExponentProfile;
use crate::weights::WeightProfile;

#[derive(Debug, Clone, Deserialize)]
pub struct Config {
    pub version: u32,
    #[serde(default)]
    pub functions: BTreeMap<String, String>,
    #[serde(default)]
    pub scenarios: Vec<ScenarioConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Deserialize)]
pub struct OutputConfig {
    #[serde(default = "default_path")]
    pub path: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

fn default_path() -> PathBuf {
    PathBuf::from("out")
}

fn default_formats() -> Vec<Format> {
    vec![Format::Json, Format::Csv]
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            path: default_path(),
            formats: default_formats(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(flatten)]
    pub kind: ScenarioKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

/// An explicit list of values or a generated grid.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Schedule {
    List(Vec<f64>),
    Grid(GridSpec),
}

impl Schedule {
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            Schedule::List(v) if v.is_empty() => Err(Error::Config("empty schedule".into())),
            Schedule::List(v) => Ok(v.clone()),
            Schedule::Grid(g) => {
                if g.points < 2 {
                    return Err(Error::Config(format!("grid needs at least 2 points, got {}", g.points)));
                }
                match g.spacing {
                    Spacing::Log => {
                        if !(g.start > 0.0 && g.stop > 0.0) {
                            return Err(Error::Config("log grids need positive endpoints".into()));
                        }
                        let ratio = g.stop / g.start;
                        let last = (g.points - 1) as f64;
                        Ok((0..g.points).map(|i| g.start * ratio.powf(i as f64 / last)).collect())
                    }
                    Spacing::Linear => {
                        let step = (g.stop - g.start) / (g.points - 1) as f64;
                        Ok((0..g.points).map(|i| g.start + step * i as f64).collect())
                    }
                }
            }
        }
    }
}

/// An exponent given directly or as the conjugate of another one, optionally
/// with inverted argument (`t -> p'(1/t)`).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ExponentRef {
    Expr(String),
    Conjugate {
        conjugate_of: String,
        #[serde(default)]
        inverted: bool,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScenarioKind {
    HyScaling {
        p: ExponentRef,
        q: ExponentRef,
        f: String,
        lambda: Option<Schedule>,
        fit_from: Option<usize>,
        slope_tolerance: Option<f64>,
    },
    TranslationLimit {
        p: ExponentRef,
        f: String,
        h: Option<Schedule>,
        tolerance: Option<f64>,
    },
    FtBound {
        n: usize,
        family: Vec<String>,
        /// Monotone class declared for every family member.
        alpha: Option<f64>,
        #[serde(default)]
        ball: bool,
        xi: Option<Schedule>,
        ball_xi: Option<Schedule>,
    },
    PittVerify {
        n: usize,
        p: f64,
        alpha: f64,
        /// Power weight `v(t) = t^{gamma p}`; exclusive with `v`.
        gamma: Option<f64>,
        v: Option<String>,
        direction: Direction,
        radii: Option<Vec<f64>>,
    },
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a `.json` file as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let config = if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)?
        } else {
            Self::from_toml(&text)?
        };
        Ok(config)
    }

    /// Checks the version, scenario names and output formats, then parses every
    /// function and builds every scenario. Nothing is computed.
    pub fn resolve(&self) -> Result<Vec<(String, Scenario)>> {
        if self.version != 1 {
            return Err(Error::Config(format!("unsupported config version {}", self.version)));
        }
        if self.output.formats.is_empty() {
            return Err(Error::Config("output.formats is empty".into()));
        }
        let mut functions = BTreeMap::new();
        for (name, src) in &self.functions {
            let f = ScalarFn::parse(src).map_err(|e| Error::Config(format!("function `{name}`: {e}")))?;
            functions.insert(name.clone(), f);
        }
        let resolver = Resolver { functions };
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for sc in &self.scenarios {
            let valid_name = !sc.name.is_empty()
                && sc
                    .name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
            if !valid_name {
                return Err(Error::Config(format!("invalid scenario name `{}`", sc.name)));
            }
            if !seen.insert(sc.name.clone()) {
                return Err(Error::Config(format!("duplicate scenario name `{}`", sc.name)));
            }
            let scenario = resolver
                .scenario(&sc.kind)
                .map_err(|e| Error::Config(format!("scenario `{}`: {e}", sc.name)))?;
            out.push((sc.name.clone(), scenario));
        }
        Ok(out)
    }
}

struct Resolver {
    functions: BTreeMap<String, ScalarFn>,
}

impl Resolver {
    fn function(&self, src: &str) -> Result<ScalarFn> {
        match self.functions.get(src.trim()) {
            Some(f) => Ok(f.clone()),
            None => ScalarFn::parse(src),
        }
    }

    fn exponent(&self, r: &ExponentRef) -> Result<ExponentProfile> {
        match r {
            ExponentRef::Expr(src) => ExponentProfile::new(self.function(src)?),
            ExponentRef::Conjugate { conjugate_of, inverted } => {
                let base = ExponentProfile::new(self.function(conjugate_of)?)?;
                let base = if *inverted { base.inverted_argument()? } else { base };
                base.conjugate()
            }
        }
    }

    fn scenario(&self, kind: &ScenarioKind) -> Result<Scenario> {
        Ok(match kind {
            ScenarioKind::HyScaling {
                p,
                q,
                f,
                lambda,
                fit_from,
                slope_tolerance,
            } => {
                let mut params = HyScalingParams::new(self.exponent(p)?, self.exponent(q)?, self.function(f)?);
                if let Some(l) = lambda {
                    params.lambdas = l.values()?;
                }
                if let Some(k) = fit_from {
                    params.fit_from = *k;
                }
                if let Some(t) = slope_tolerance {
                    params.slope_tolerance = *t;
                }
                if params.lambdas.len() < params.fit_from + 2 {
                    return Err(Error::Config("lambda schedule too short for fit_from".into()));
                }
                Scenario::HyScaling(params)
            }
            ScenarioKind::TranslationLimit { p, f, h, tolerance } => {
                let mut params = TranslationParams::new(self.exponent(p)?, self.function(f)?);
                if let Some(h) = h {
                    params.h = h.values()?;
                }
                if let Some(t) = tolerance {
                    params.tolerance = *t;
                }
                Scenario::TranslationLimit(params)
            }
            ScenarioKind::FtBound {
                n,
                family,
                alpha,
                ball,
                xi,
                ball_xi,
            } => {
                let members = family
                    .iter()
                    .map(|src| {
                        let f = RadialProfile::new(self.function(src)?, *n)?;
                        match alpha {
                            Some(a) => f.with_monotone_class(*a),
                            None => Ok(f),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut params = FtBoundParams::new(*n, members, *ball);
                if let Some(x) = xi {
                    params.xi = x.values()?;
                }
                if let Some(x) = ball_xi {
                    params.ball_xi = x.values()?;
                }
                Scenario::FtBound(params)
            }
            ScenarioKind::PittVerify {
                n,
                p,
                alpha,
                gamma,
                v,
                direction,
                radii,
            } => {
                let weight = match (gamma, v) {
                    (Some(g), None) => WeightProfile::power(g * p),
                    (None, Some(src)) => WeightProfile::new(self.function(src)?)?,
                    _ => return Err(Error::Config("give exactly one of `gamma` and `v`".into())),
                };
                let mut params = PittParams::new(weight, *p, *alpha, *n, *direction);
                if let Some(r) = radii {
                    if r.is_empty() {
                        return Err(Error::Config("empty radii".into()));
                    }
                    params.radii = r.clone();
                }
                Scenario::PittVerify(params)
            }
        })
    }
}
