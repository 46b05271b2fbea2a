use super::profile::Profile;
use crate::error::{Error, Result};
use crate::frac_laplacian::Grid1D;

pub const DEFAULT_BLOW_THRESHOLD: f64 = 1e8;

/// One simulation of the coupled problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub alpha: f64,
    pub s: f64,
    pub a: f64,
    pub b: f64,
    pub n: usize,
    /// Initial (and, outside the blow-up regime, only) time step.
    pub dt: f64,
    pub t_end: f64,
    pub u0: Profile,
    pub blow_threshold: f64,
    /// Smallest admissible step; `None` means `1e-14·t_end`.
    pub dt_floor: Option<f64>,
    /// Refine a detected blow-up time by repeated dt halving.
    pub refine_blowup: bool,
    /// Keep every recorded field in the result.
    pub keep_fields: bool,
}

impl SimConfig {
    /// Configuration on `(0, 1)` with default thresholds.
    pub fn new(alpha: f64, s: f64, n: usize, dt: f64, t_end: f64, u0: Profile) -> Self {
        Self {
            alpha,
            s,
            a: 0.0,
            b: 1.0,
            n,
            dt,
            t_end,
            u0,
            blow_threshold: DEFAULT_BLOW_THRESHOLD,
            dt_floor: None,
            refine_blowup: true,
            keep_fields: false,
        }
    }

    pub fn with_domain(mut self, a: f64, b: f64) -> Self {
        self.a = a;
        self.b = b;
        self
    }

    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::new(self.a, self.b, self.n)
    }

    pub fn dt_floor(&self) -> f64 {
        self.dt_floor.unwrap_or(1e-14 * self.t_end)
    }

    /// Checks every range; the error names the offending key.
    pub fn validate(&self) -> Result<()> {
        let range = |key: &str, value: String, expected: &str| Error::Range {
            context: "simulation".into(),
            key: key.into(),
            value,
            expected: expected.into(),
        };
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(range("alpha", self.alpha.to_string(), "0 < alpha <= 1"));
        }
        if !(self.s > 0.0 && self.s < 1.0) {
            return Err(range("s", self.s.to_string(), "0 < s < 1"));
        }
        if !(self.a.is_finite() && self.b.is_finite() && self.a < self.b) {
            return Err(range(
                "domain",
                format!("{},{}", self.a, self.b),
                "finite a < b",
            ));
        }
        if self.n < 2 {
            return Err(range("n", self.n.to_string(), "n >= 2"));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(range("t_end", self.t_end.to_string(), "finite t_end > 0"));
        }
        if !(self.dt > 0.0 && self.dt <= self.t_end) {
            return Err(range("dt", self.dt.to_string(), "0 < dt <= t_end"));
        }
        if !(self.blow_threshold > 0.0) {
            return Err(range(
                "blow_threshold",
                self.blow_threshold.to_string(),
                "> 0",
            ));
        }
        if let Some(f) = self.dt_floor {
            if !(f > 0.0 && f <= self.dt) {
                return Err(range("dt_floor", f.to_string(), "0 < dt_floor <= dt"));
            }
        }
        Ok(())
    }
}
