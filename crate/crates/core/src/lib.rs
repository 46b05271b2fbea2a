//! Numerical simulator and verification harness for the time-space fractional
//! logistic reaction-diffusion problem
//!
//! ```text
//! ∂ₜ^α u + (−Δ)^s_Ω u = −u(1 − u)   in Ω = (a, b),  t > 0
//! u = 0                             outside Ω
//! u(·, 0) = u₀
//! ```
//!
//! with a Caputo time derivative of order `α ∈ (0, 1]` and the regional
//! fractional Laplacian of order `s ∈ (0, 1)`.
//!
//! Modules, bottom-up:
//!
//! - [`special_functions`]: Gamma and the one-parameter Mittag-Leffler function.
//! - [`caputo_time`]: L1 discretization of the Caputo derivative and the two
//!   scalar comparison equations (linear decay, logistic blow-up).
//! - [`frac_laplacian`]: dense assembly of the regional operator on a uniform
//!   grid and its principal eigenpair.
//! - [`rd_solver`]: the coupled IMEX stepper, energy / eigen-projection
//!   monitors, blow-up detection and the blow-up time bracket.
//! - [`harness`]: campaign configuration, execution and reporting.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// reference values are kept with all the digits of their oracle
#![allow(clippy::excessive_precision)]

pub mod caputo_time;
pub mod error;
pub mod frac_laplacian;
pub mod harness;
pub(crate) mod linalg;
pub mod rd_solver;
pub mod special_functions;

pub use error::{Error, Result};
