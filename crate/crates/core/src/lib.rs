//! Numerical workbench for Fourier inequalities on radial and variable-exponent
//! function spaces.
//!
//! The crate is organized bottom-up:
//!
//! - [`funcdsl`]: a small expression language for scalar functions of one
//!   variable `t > 0` (exponents, weights and radial profiles).
//! - [`bessel`]: Bessel functions of the first kind `J_nu` and their zeros.
//! - [`quad`]: adaptive Gauss-Kronrod quadrature, semi-infinite integrals and
//!   oscillatory Bessel-kernel integrals over `(0, inf)`.
//! - [`varlp`]: modulars and Luxemburg norms in variable Lebesgue spaces.
//! - [`hankel`]: radial Fourier transforms and their majorants.
//! - [`weights`]: decidable weight conditions for Pitt and Hardy-Littlewood
//!   type inequalities.
//! - [`experiments`]: scenario runners producing [`experiments::ExperimentReport`]s.
//! - [`config`]: scenario configuration files (TOML or JSON).
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod bessel;
pub mod config;
pub mod error;
pub mod experiments;
pub mod funcdsl;
pub mod hankel;
pub mod quad;
pub mod varlp;
pub mod weights;

pub use error::{Error, Result};
