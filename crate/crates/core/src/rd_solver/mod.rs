//! Coupled solver for `∂^α u + (−Δ)^s_Ω u = −u(1 − u)` with monitors for
//! the energy `E = ∫u²`, the eigen-projection `H = ∫u e₁`, blow-up detection
//! and the blow-up time bracket.
//!
//! Each step solves `((c + 1)·I + A) uⁿ = c·uⁿ⁻¹ − memory + (uⁿ⁻¹)²` where `c`
//! is the leading L1 weight. The system matrix is a symmetric M-matrix plus a
//! positive multiple of the identity, so every step is a convex combination
//! of nonnegative data when `0 ≤ uⁿ⁻¹ ≤ 1`: the discrete scheme keeps `[0, 1]`
//! invariant and preserves order.

mod blowup;
mod config;
mod fit;
mod history;
mod profile;
mod step;

pub use blowup::{blowup_bracket, BlowupBracket, BlowupEvent};
pub use config::{SimConfig, DEFAULT_BLOW_THRESHOLD};
pub use fit::decay_rate_fit;
pub use history::HistoryBuffer;
pub use profile::Profile;
pub use step::step;

use crate::caputo_time::{l1_weights, nonuniform_step_weights, StepWeights};
use crate::error::{Error, Result};
use crate::frac_laplacian::{
    assemble_regional, principal_eigenpair, EigenPair, Field, Grid1D, OperatorMatrix,
};
use step::SystemCache;

/// Once `max u` exceeds this multiple of `1 + λ₁` the run is treated as a
/// potential blow-up and steps are size-controlled.
const ADAPTIVE_FACTOR: f64 = 10.0;
/// Relative growth of `max u` per step above which a step is rejected.
const GROWTH_LIMIT: f64 = 0.5;
/// Target number of recorded points on a uniform run.
const TRACE_POINTS: usize = 2000;
const MAX_REFINEMENTS: usize = 6;
/// Relative change of the blow-up time under dt halving accepted as converged.
const REFINEMENT_TOL: f64 = 0.01;

/// Operator and principal eigenpair of one grid, shared by many runs.
#[derive(Debug, Clone)]
pub struct Discretization {
    grid: Grid1D,
    op: OperatorMatrix,
    eig: EigenPair,
}

impl Discretization {
    pub fn new(grid: Grid1D, s: f64) -> Result<Self> {
        let op = assemble_regional(&grid, s)?;
        let eig = principal_eigenpair(&op, &grid)?;
        Ok(Self { grid, op, eig })
    }

    pub fn for_config(cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        Self::new(cfg.grid()?, cfg.s)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn op(&self) -> &OperatorMatrix {
        &self.op
    }

    pub fn eigenpair(&self) -> &EigenPair {
        &self.eig
    }

    pub fn lambda1(&self) -> f64 {
        self.eig.lambda1
    }

    /// `h·Σ u_i e1_i`.
    pub fn projection(&self, u: &[f64]) -> f64 {
        let e1 = self.eig.e1.values();
        self.grid.h() * u.iter().zip(e1).map(|(a, b)| a * b).sum::<f64>()
    }
}

/// Monitors at one recorded time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub t: f64,
    /// `h·Σ u_i²`.
    pub energy: f64,
    /// `h·Σ u_i e1_i`.
    pub h: f64,
    /// `h·Σ u_i² e1_i`.
    pub weighted_energy: f64,
    pub umin: f64,
    pub umax: f64,
}

impl TracePoint {
    fn measure(t: f64, u: &[f64], disc: &Discretization) -> Self {
        let h = disc.grid.h();
        let e1 = disc.eig.e1.values();
        let (mut energy, mut proj, mut weighted) = (0.0, 0.0, 0.0);
        let (mut umin, mut umax) = (f64::INFINITY, f64::NEG_INFINITY);
        for (&v, &e) in u.iter().zip(e1) {
            energy += v * v;
            proj += v * e;
            weighted += v * v * e;
            umin = umin.min(v);
            umax = umax.max(v);
        }
        Self {
            t,
            energy: h * energy,
            h: h * proj,
            weighted_energy: h * weighted,
            umin,
            umax,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub trace: Vec<TracePoint>,
    /// Recorded fields, parallel to `trace`, when requested.
    pub fields: Vec<Field>,
    pub lambda1: f64,
    /// `h·Σ u0_i e1_i`.
    pub h0: f64,
    pub blowup: Option<BlowupEvent>,
    /// Present when the initial data satisfy the admissibility condition.
    pub bracket: Option<BlowupBracket>,
    /// Fitted `d ln E / d ln t` over `[t_end/100, t_end]` for bounded runs
    /// spanning two decades.
    pub decay_slope: Option<f64>,
    /// Extremes over every accepted step, not only the recorded ones.
    pub global_min: f64,
    pub global_max: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl SimulationResult {
    pub fn times(&self) -> Vec<f64> {
        self.trace.iter().map(|p| p.t).collect()
    }

    pub fn energy(&self) -> Vec<f64> {
        self.trace.iter().map(|p| p.energy).collect()
    }

    pub fn h_functional(&self) -> Vec<f64> {
        self.trace.iter().map(|p| p.h).collect()
    }

    pub fn bounds(&self) -> Vec<(f64, f64)> {
        self.trace.iter().map(|p| (p.umin, p.umax)).collect()
    }
}

fn max_of(u: &[f64]) -> f64 {
    u.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(u: &[f64]) -> f64 {
    u.iter().copied().fold(f64::INFINITY, f64::min)
}

/// One pass to `t_end` or blow-up with initial step `dt`.
fn integrate(
    cfg: &SimConfig,
    disc: &Discretization,
    u0: &[f64],
    dt: f64,
) -> Result<SimulationResult> {
    let alpha = cfg.alpha;
    let markov = alpha == 1.0;
    let adaptive_level = ADAPTIVE_FACTOR * (1.0 + disc.lambda1());
    let floor = cfg.dt_floor();
    let n_steps = (cfg.t_end / dt - 1e-9).ceil().max(1.0) as usize;
    let stride = (n_steps / TRACE_POINTS).max(1);
    let end = cfg.t_end * (1.0 - 1e-12);

    let mut uniform = l1_weights(alpha, dt, n_steps.min(1024))?;
    let mut cache = SystemCache::new(&disc.op);
    let mut history = HistoryBuffer::new(u0.to_vec());
    let mut tau = dt;
    let mut on_uniform_mesh = true;

    let mut out = SimulationResult {
        trace: vec![TracePoint::measure(0.0, u0, disc)],
        fields: Vec::new(),
        lambda1: disc.lambda1(),
        h0: disc.projection(u0),
        blowup: None,
        bracket: None,
        decay_slope: None,
        global_min: min_of(u0),
        global_max: max_of(u0),
        accepted_steps: 0,
        rejected_steps: 0,
    };
    let keep = |out: &mut SimulationResult, t: f64, u: &[f64]| -> Result<()> {
        out.trace.push(TracePoint::measure(t, u, disc));
        if cfg.keep_fields {
            out.fields.push(Field::new(disc.grid, u.to_vec())?);
        }
        Ok(())
    };
    if cfg.keep_fields {
        out.fields.push(Field::new(disc.grid, u0.to_vec())?);
    }

    let mut t = 0.0;
    while t < end {
        let weights = if markov {
            // first-order limit: no memory, so only the last snapshot is kept
            StepWeights {
                current: 1.0 / tau,
                past: Vec::new(),
            }
        } else if on_uniform_mesh && tau == dt {
            let n = history.len();
            if uniform.len() < n {
                uniform.extend_to(2 * n);
            }
            uniform.step_weights(n)
        } else {
            on_uniform_mesh = false;
            let mut times = history.times().to_vec();
            times.push(t + tau);
            nonuniform_step_weights(alpha, &times)?
        };

        let prev_max = max_of(history.last());
        let candidate = cache.advance(&history, &weights)?;
        let new_max = max_of(&candidate);
        let controlled = prev_max > adaptive_level;
        let finite = candidate.iter().all(|v| v.is_finite());
        if !finite || (controlled && (new_max - prev_max) / prev_max > GROWTH_LIMIT) {
            out.rejected_steps += 1;
            tau *= 0.5;
            if tau < floor {
                return Err(Error::Inconclusive { t, dt: tau });
            }
            continue;
        }

        t += tau;
        out.accepted_steps += 1;
        out.global_min = out.global_min.min(min_of(&candidate));
        out.global_max = out.global_max.max(new_max);
        let blown = new_max >= cfg.blow_threshold;
        if blown
            || controlled
            || new_max > adaptive_level
            || out.accepted_steps.is_multiple_of(stride)
            || t >= end
        {
            keep(&mut out, t, &candidate)?;
        }
        if blown {
            out.blowup = Some(BlowupEvent {
                t_star: t,
                terminal_max: new_max,
                dt,
                refinements: 0,
                last_change: f64::NAN,
            });
            break;
        }
        if markov {
            history = HistoryBuffer::starting_at(t, candidate);
        } else {
            history.push(t, candidate)?;
        }
    }
    Ok(out)
}

/// Runs `cfg` from its profile on a freshly assembled discretization.
pub fn run(cfg: &SimConfig) -> Result<SimulationResult> {
    let disc = Discretization::for_config(cfg)?;
    run_with(cfg, &disc)
}

/// Runs `cfg` from its profile on a prepared discretization.
pub fn run_with(cfg: &SimConfig, disc: &Discretization) -> Result<SimulationResult> {
    cfg.validate()?;
    let u0 = cfg.u0.evaluate(disc.grid())?;
    run_from(cfg, disc, &u0)
}

/// Runs `cfg` from explicit initial data; `cfg.u0` is ignored.
///
/// A detected blow-up is refined by halving the initial step until the
/// blow-up time moves by less than 1%; the returned traces belong to the
/// finest run.
pub fn run_from(cfg: &SimConfig, disc: &Discretization, u0: &Field) -> Result<SimulationResult> {
    cfg.validate()?;
    if disc.grid().n() != cfg.n || u0.grid() != disc.grid() {
        return Err(Error::DimensionMismatch {
            expected: cfg.n,
            got: u0.values().len(),
        });
    }
    let mut result = integrate(cfg, disc, u0.values(), cfg.dt)?;
    if cfg.refine_blowup {
        if let Some(first) = result.blowup {
            result = refine(cfg, disc, u0.values(), first)?;
        }
    }
    if result.h0 > 0.0 {
        let bracket = blowup_bracket(result.h0, cfg.alpha, disc.lambda1())?;
        if bracket.admissible {
            result.bracket = Some(bracket);
        }
    }
    if result.blowup.is_none() && cfg.t_end / 100.0 >= cfg.dt {
        let times = result.times();
        let energy = result.energy();
        result.decay_slope = decay_rate_fit(&times, &energy, (cfg.t_end / 100.0, cfg.t_end)).ok();
    }
    Ok(result)
}

fn refine(
    cfg: &SimConfig,
    disc: &Discretization,
    u0: &[f64],
    first: BlowupEvent,
) -> Result<SimulationResult> {
    let mut previous = first.t_star;
    let mut dt = cfg.dt;
    for r in 1..=MAX_REFINEMENTS {
        dt *= 0.5;
        let mut finer = integrate(cfg, disc, u0, dt)?;
        let Some(mut event) = finer.blowup else {
            return Err(Error::Inconclusive { t: cfg.t_end, dt });
        };
        let change = ((event.t_star - previous) / event.t_star).abs();
        event.refinements = r;
        event.last_change = change;
        finer.blowup = Some(event);
        if change < REFINEMENT_TOL {
            return Ok(finer);
        }
        previous = event.t_star;
    }
    Err(Error::NonConvergence {
        what: "blow-up time refinement",
        iterations: MAX_REFINEMENTS,
    })
}

/// Blow-up time of `cfg`, refined under dt halving; `None` for a bounded run.
pub fn detect_blowup(cfg: &SimConfig, disc: &Discretization) -> Result<Option<BlowupEvent>> {
    Ok(run_with(cfg, disc)?.blowup)
}

#[cfg(test)]
mod tests;
