//! Gamma and one-parameter Mittag-Leffler functions on the real line.
//!
//! All functions here are pure; they may be called concurrently from any
//! number of threads.

mod envelope;
mod gamma;
mod mittag_leffler;
mod quadrature;

pub use envelope::{
    calibrate_envelope, envelope_constant, format_envelope_table, ml_decay_envelope,
    parse_envelope_table, ENVELOPE_ALPHAS,
};
pub use gamma::{gamma_fn, ln_gamma};
pub use mittag_leffler::{ml_decay, ml_eval, MlParams, ML_ALPHA_MIN, ML_Z_MAX, ML_Z_MIN};

pub(crate) use gamma::gamma_positive;
