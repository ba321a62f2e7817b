//! Rigorous high-precision evaluation of the bound functions used by the peel
//! recursion, and verifiers for the inequalities relating them.
//!
//! Everything is expressed through `ell = log_{r+1}(n)`; `n` itself is never
//! materialised because the interesting thresholds are astronomically large.

pub mod alpha;
mod error;
pub mod functions;
pub mod params;
pub mod real;
pub mod verify;

pub use alpha::alpha_constant;
pub use error::BoundsError;
pub use functions::BoundContext;
pub use params::{check_param_fns, default_params, DefaultParams, ParamFns, ParamSource, RationalParams};
pub use real::{BigReal, DEFAULT_PRECISION};
pub use rug::{Float, Integer, Rational};
