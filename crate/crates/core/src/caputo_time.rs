//! L1 discretization of the Caputo derivative and the two scalar fractional
//! ODEs used as comparison equations:
//!
//! - linear decay `∂^α y = −rate·y`, whose exact solution is `y₀E_α(−rate·t^α)`;
//! - logistic growth `∂^α y = y(y + 1)`, which blows up in finite time for
//!   `y₀ > 0`.
//!
//! On a mesh `t₀ = 0 < t₁ < … < tₙ` the L1 approximation is
//!
//! ```text
//! ∂^α u(tₙ) ≈ Σ_{k=1..n} c_{n,k} (u^k − u^{k−1}),
//! c_{n,k} = [(tₙ − t_{k−1})^{1−α} − (tₙ − t_k)^{1−α}] / (τ_k Γ(2 − α))
//! ```
//!
//! which on a uniform mesh reduces to `scale · b_{n−k}` with
//! `b_j = (j+1)^{1−α} − j^{1−α}` and `scale = dt^{−α}/Γ(2 − α)`.

use crate::error::{Error, Result};
use crate::special_functions::gamma_positive;

/// Uniform-mesh L1 weights.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Weights {
    alpha: f64,
    dt: f64,
    b: Vec<f64>,
    scale: f64,
}

/// Weights of one L1 step, split into the newest increment and the memory.
///
/// The discrete derivative at `tₙ` is
/// `current·(uⁿ − uⁿ⁻¹) + Σ_{k=1..n−1} past[k−1]·(u^k − u^{k−1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepWeights {
    pub current: f64,
    pub past: Vec<f64>,
}

impl StepWeights {
    /// Memory term `Σ past[k−1]·(u^k − u^{k−1})` for a scalar history
    /// `u⁰, …, uⁿ⁻¹`.
    pub fn memory(&self, history: &[f64]) -> f64 {
        debug_assert_eq!(history.len(), self.past.len() + 1);
        self.past
            .iter()
            .zip(history.windows(2))
            .map(|(w, pair)| w * (pair[1] - pair[0]))
            .sum()
    }
}

/// `(j+1)^β − j^β` without cancellation for large `j`.
fn power_increment(j: f64, beta: f64) -> f64 {
    if j == 0.0 {
        return 1.0;
    }
    j.powf(beta) * (beta * (1.0 / j).ln_1p()).exp_m1()
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain("alpha", alpha, "0 < alpha <= 1"))
    }
}

/// Weights `b_0..b_{n_steps−1}` and the scale `dt^{−α}/Γ(2 − α)`.
pub fn l1_weights(alpha: f64, dt: f64, n_steps: usize) -> Result<L1Weights> {
    check_alpha(alpha)?;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::domain("dt", dt, "finite dt > 0"));
    }
    if n_steps == 0 {
        return Err(Error::domain("n_steps", 0.0, "n_steps >= 1"));
    }
    let beta = 1.0 - alpha;
    let b = (0..n_steps)
        .map(|j| power_increment(j as f64, beta))
        .collect();
    Ok(L1Weights {
        alpha,
        dt,
        b,
        scale: dt.powf(-alpha) / gamma_positive(2.0 - alpha),
    })
}

impl L1Weights {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Number of steps these weights cover.
    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    /// Appends weights until at least `n_steps` are available.
    pub fn extend_to(&mut self, n_steps: usize) {
        let beta = 1.0 - self.alpha;
        for j in self.b.len()..n_steps {
            self.b.push(power_increment(j as f64, beta));
        }
    }

    /// Weights of step `n ≥ 1` (the step producing `uⁿ`).
    ///
    /// # Panics
    ///
    /// If `n` is zero or exceeds [`len`](Self::len).
    pub fn step_weights(&self, n: usize) -> StepWeights {
        assert!(
            n >= 1 && n <= self.b.len(),
            "step {n} outside 1..={}",
            self.b.len()
        );
        StepWeights {
            current: self.scale * self.b[0],
            past: (1..n).map(|k| self.scale * self.b[n - k]).collect(),
        }
    }

    /// Discrete Caputo derivative at `tₙ` of the samples `u⁰..uⁿ`.
    pub fn caputo(&self, values: &[f64]) -> f64 {
        let n = values.len() - 1;
        let w = self.step_weights(n);
        w.current * (values[n] - values[n - 1]) + w.memory(&values[..n])
    }
}

/// L1 weights of the newest step on an arbitrary mesh `t₀ < … < tₙ`.
pub fn nonuniform_step_weights(alpha: f64, times: &[f64]) -> Result<StepWeights> {
    check_alpha(alpha)?;
    if times.len() < 2 {
        return Err(Error::domain(
            "times",
            times.len() as f64,
            "at least two mesh points",
        ));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("times", f64::NAN, "strictly increasing"));
    }
    let n = times.len() - 1;
    let beta = 1.0 - alpha;
    let g = gamma_positive(2.0 - alpha);
    let tn = times[n];
    let tau_n = tn - times[n - 1];
    let past = (1..n)
        .map(|k| {
            let tau = times[k] - times[k - 1];
            let near = tn - times[k];
            near.powf(beta) * (beta * (tau / near).ln_1p()).exp_m1() / (tau * g)
        })
        .collect();
    Ok(StepWeights {
        current: tau_n.powf(-alpha) / g,
        past,
    })
}

/// Samples `(tₙ, yₙ)` of a scalar solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarTrace {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl ScalarTrace {
    pub fn last(&self) -> Option<(f64, f64)> {
        Some((*self.times.last()?, *self.values.last()?))
    }
}

fn step_count(dt: f64, t_end: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::domain("dt", dt, "finite dt > 0"));
    }
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::domain("t_end", t_end, "finite t_end > 0"));
    }
    if dt > t_end {
        return Err(Error::domain("dt", dt, "dt <= t_end"));
    }
    Ok((t_end / dt - 1e-9).ceil() as usize)
}

/// Implicit L1 solution of `∂^α y = −rate·y`, `y(0) = y0`, on the uniform
/// mesh `tₙ = n·dt` covering `[0, t_end]`.
pub fn solve_linear_fode(
    alpha: f64,
    rate: f64,
    y0: f64,
    dt: f64,
    t_end: f64,
) -> Result<ScalarTrace> {
    check_alpha(alpha)?;
    if !rate.is_finite() || !y0.is_finite() {
        return Err(Error::domain("rate/y0", rate + y0, "finite"));
    }
    let n_steps = step_count(dt, t_end)?;
    let w = l1_weights(alpha, dt, n_steps)?;
    let diag = w.scale * w.b[0] + rate;
    if !(diag > 0.0) {
        return Err(Error::StepFailure {
            t: dt,
            reason: format!("implicit coefficient {diag} is not positive"),
        });
    }
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut values = Vec::with_capacity(n_steps + 1);
    let mut increments: Vec<f64> = Vec::with_capacity(n_steps);
    times.push(0.0);
    values.push(y0);
    for n in 1..=n_steps {
        // Σ_{k=1..n−1} b_{n−k} Δ_k
        let memory: f64 = increments
            .iter()
            .enumerate()
            .map(|(i, d)| w.b[n - 1 - i] * d)
            .sum();
        let prev = values[n - 1];
        let y = w.scale * (w.b[0] * prev - memory) / diag;
        increments.push(y - prev);
        times.push(n as f64 * dt);
        values.push(y);
    }
    Ok(ScalarTrace { times, values })
}

/// Controls for [`solve_logistic_fode`].
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticOptions {
    /// A run counts as blown up once `y` reaches this value.
    pub blow_threshold: f64,
    /// Smallest admissible step; `None` means `1e-14·t_end`.
    pub dt_floor: Option<f64>,
    /// A step is rejected and `dt` halved when `(yⁿ − yⁿ⁻¹)/yⁿ⁻¹` exceeds this.
    pub growth_limit: f64,
}

impl Default for LogisticOptions {
    fn default() -> Self {
        Self {
            blow_threshold: 1e8,
            dt_floor: None,
            growth_limit: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticSolution {
    pub trace: ScalarTrace,
    /// First mesh time with `y ≥ blow_threshold`, if reached before `t_end`.
    pub blow_time: Option<f64>,
}

/// Semi-implicit L1 solution of `∂^α y = y(y + 1)`: the linear term is
/// implicit, the quadratic term explicit. The step is halved whenever the
/// relative increment exceeds the growth limit, so the mesh is uniform only
/// until the solution starts to grow quickly.
pub fn solve_logistic_fode(
    alpha: f64,
    y0: f64,
    dt: f64,
    t_end: f64,
    opts: &LogisticOptions,
) -> Result<LogisticSolution> {
    check_alpha(alpha)?;
    if !(y0 >= 0.0) || !y0.is_finite() {
        return Err(Error::domain("y0", y0, "finite y0 >= 0"));
    }
    step_count(dt, t_end)?;
    if !(opts.blow_threshold > y0) {
        return Err(Error::domain(
            "blow_threshold",
            opts.blow_threshold,
            "blow_threshold > y0",
        ));
    }
    let floor = opts.dt_floor.unwrap_or(1e-14 * t_end);
    let end = t_end * (1.0 - 1e-12);

    let mut times = vec![0.0];
    let mut values = vec![y0];
    let mut tau = dt;
    let mut uniform = Some(l1_weights(alpha, dt, 64)?);
    loop {
        let t = *times.last().unwrap();
        if t >= end {
            return Ok(LogisticSolution {
                trace: ScalarTrace { times, values },
                blow_time: None,
            });
        }
        let n = times.len();
        let weights = match uniform.as_mut() {
            Some(u) if tau == dt => {
                if u.len() < n {
                    u.extend_to(2 * n);
                }
                u.step_weights(n)
            }
            _ => {
                uniform = None;
                times.push(t + tau);
                let w = nonuniform_step_weights(alpha, &times);
                times.pop();
                w?
            }
        };
        let y = values[n - 1];
        let diag = weights.current - 1.0;
        let candidate = if diag > 0.0 {
            let memory = weights.memory(&values);
            Some((weights.current * y - memory + y * y) / diag)
        } else {
            None
        };
        let accept = match candidate {
            Some(next) if next.is_finite() => y == 0.0 || (next - y) / y <= opts.growth_limit,
            _ => false,
        };
        if !accept {
            tau *= 0.5;
            if tau < floor {
                return Err(Error::Inconclusive { t, dt: tau });
            }
            continue;
        }
        let next = candidate.unwrap();
        times.push(t + tau);
        values.push(next);
        if next >= opts.blow_threshold {
            let blow_time = Some(t + tau);
            return Ok(LogisticSolution {
                trace: ScalarTrace { times, values },
                blow_time,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_functions::ml_decay;
    use proptest::prelude::*;

    #[test]
    fn weight_examples() {
        let w = l1_weights(0.5, 0.01, 4).unwrap();
        assert_eq!(w.b()[0], 1.0);
        assert!((w.b()[1] - 0.414_213_6).abs() < 1e-7);
        assert!((w.b()[1] - (2.0_f64.sqrt() - 1.0)).abs() < 1e-15);
        let w = l1_weights(1.0, 0.3, 4).unwrap();
        assert_eq!(w.b(), &[1.0, 0.0, 0.0, 0.0]);
        assert!((w.scale() - 1.0 / 0.3).abs() < 1e-14);
    }

    #[test]
    fn weight_errors() {
        assert!(l1_weights(0.0, 0.1, 4).is_err());
        assert!(l1_weights(1.1, 0.1, 4).is_err());
        assert!(l1_weights(0.5, 0.0, 4).is_err());
        assert!(l1_weights(0.5, -1.0, 4).is_err());
        assert!(l1_weights(0.5, 0.1, 0).is_err());
    }

    proptest! {
        #[test]
        fn weights_decrease_and_telescope(alpha in 0.01f64..0.99, n in 1usize..3000) {
            let w = l1_weights(alpha, 0.1, n).unwrap();
            prop_assert_eq!(w.b()[0], 1.0);
            prop_assert!(w.b().iter().all(|&b| b > 0.0));
            prop_assert!(w.b().windows(2).all(|p| p[1] < p[0]));
            let sum: f64 = w.b().iter().sum();
            let exact = (n as f64).powf(1.0 - alpha);
            prop_assert!(((sum - exact) / exact).abs() < 1e-12);
        }

        #[test]
        fn nonuniform_reduces_to_uniform(alpha in 0.05f64..1.0, n in 1usize..60, dt in 1e-3f64..1.0) {
            let times: Vec<f64> = (0..=n).map(|k| k as f64 * dt).collect();
            let a = nonuniform_step_weights(alpha, &times).unwrap();
            let b = l1_weights(alpha, dt, n).unwrap().step_weights(n);
            prop_assert!(((a.current - b.current) / b.current).abs() < 1e-12);
            for (x, y) in a.past.iter().zip(&b.past) {
                prop_assert!((x - y).abs() <= 1e-9 * b.current);
            }
        }
    }

    #[test]
    fn caputo_of_linear_function_is_exact() {
        // ∂^α t = t^{1−α}/Γ(2 − α); L1 is exact for piecewise-linear data
        let alpha = 0.4;
        let dt = 0.05;
        let w = l1_weights(alpha, dt, 20).unwrap();
        let values: Vec<f64> = (0..=20).map(|k| k as f64 * dt).collect();
        let exact = 1.0_f64.powf(1.0 - alpha) / gamma_positive(2.0 - alpha);
        assert!((w.caputo(&values) - exact).abs() < 1e-12);
    }

    #[test]
    fn nonuniform_rejects_bad_mesh() {
        assert!(nonuniform_step_weights(0.5, &[0.0]).is_err());
        assert!(nonuniform_step_weights(0.5, &[0.0, 0.1, 0.1]).is_err());
        assert!(nonuniform_step_weights(1.5, &[0.0, 0.1]).is_err());
    }

    #[test]
    fn zero_rate_preserves_initial_value() {
        let tr = solve_linear_fode(0.5, 0.0, 3.0, 0.1, 1.0).unwrap();
        assert_eq!(tr.times.len(), 11);
        assert!((tr.times[10] - 1.0).abs() < 1e-15);
        for v in &tr.values {
            assert!((v - 3.0).abs() <= 4.0 * f64::EPSILON * 3.0);
        }
    }

    #[test]
    fn first_order_limit_is_exponential() {
        let tr = solve_linear_fode(1.0, 1.0, 1.0, 1e-4, 1.0).unwrap();
        let (t, y) = tr.last().unwrap();
        assert!((t - 1.0).abs() < 1e-12);
        assert!((y - 0.367_879_4).abs() < 1e-4);
    }

    #[test]
    fn half_order_matches_mittag_leffler() {
        let tr = solve_linear_fode(0.5, 1.0, 1.0, 1.0 / 4096.0, 1.0).unwrap();
        let (_, y) = tr.last().unwrap();
        let exact = ml_decay(0.5, 1.0).unwrap();
        assert!((exact - 0.427_583_6).abs() < 1e-7);
        assert!((y - exact).abs() < 2e-4, "{y} vs {exact}");
    }

    #[test]
    fn linear_errors() {
        assert!(solve_linear_fode(0.5, 1.0, 1.0, 2.0, 1.0).is_err());
        assert!(solve_linear_fode(0.5, 1.0, 1.0, 0.1, 0.0).is_err());
        assert!(matches!(
            solve_linear_fode(1.0, -20.0, 1.0, 0.1, 1.0),
            Err(Error::StepFailure { .. })
        ));
    }

    #[test]
    fn logistic_zero_is_fixed_point() {
        let sol = solve_logistic_fode(0.5, 0.0, 0.01, 2.0, &LogisticOptions::default()).unwrap();
        assert!(sol.blow_time.is_none());
        assert!(sol.trace.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn logistic_first_order_blow_up_times() {
        for &(y0, exact) in &[
            (1.0_f64, 2.0_f64.ln()),
            (2.0, 1.5_f64.ln()),
            (0.5, 3.0_f64.ln()),
        ] {
            let sol = solve_logistic_fode(1.0, y0, 1e-4, 5.0, &LogisticOptions::default()).unwrap();
            let t = sol.blow_time.expect("blows up");
            assert!(
                ((t - exact) / exact).abs() < 0.01,
                "y0 = {y0}: {t} vs {exact}"
            );
        }
    }

    #[test]
    fn logistic_trace_strictly_increasing() {
        // near blow-up y ~ (T − t)^{−α}, so the step needed to resolve a level
        // Y scales like Y^{−1/α}; keep the threshold reachable for small α
        let opts = LogisticOptions {
            blow_threshold: 1e4,
            ..LogisticOptions::default()
        };
        for &alpha in &[0.4, 0.7, 1.0] {
            let sol = solve_logistic_fode(alpha, 0.3, 1e-3, 10.0, &opts).unwrap();
            assert!(sol.blow_time.is_some());
            assert!(
                sol.trace.values.windows(2).all(|w| w[1] > w[0]),
                "alpha = {alpha}"
            );
            assert!(sol.trace.times.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn logistic_reports_collapse() {
        let opts = LogisticOptions {
            dt_floor: Some(1e-3),
            growth_limit: 1e-6,
            ..LogisticOptions::default()
        };
        assert!(matches!(
            solve_logistic_fode(1.0, 1.0, 0.01, 1.0, &opts),
            Err(Error::Inconclusive { .. })
        ));
    }

    #[test]
    fn logistic_stays_bounded_before_horizon() {
        let sol = solve_logistic_fode(0.8, 0.01, 0.01, 0.5, &LogisticOptions::default()).unwrap();
        assert!(sol.blow_time.is_none());
        let (t, _) = sol.trace.last().unwrap();
        assert!(t >= 0.5 - 1e-9);
    }
}
