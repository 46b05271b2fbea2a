use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{
    BlowupSpec, Campaign, CampaignSpec, ComparisonSpec, EigenSpec, L1Spec, ScalarBlowupSpec,
    SweepSpec,
};
use super::oracle::{parse_ml_oracle_table, ML_ORACLE_TABLE};
use super::report::{fmt_num, CheckRecord, Report, TraceFile};
use crate::caputo_time::{solve_linear_fode, solve_logistic_fode, LogisticOptions};
use crate::error::{Error, Result};
use crate::frac_laplacian::{
    assemble_auxiliary, assemble_regional, dense_eigenpair, principal_eigenpair, Field, Grid1D,
};
use crate::rd_solver::{
    blowup_bracket, run_from, run_with, Discretization, Profile, SimConfig, SimulationResult,
};
use crate::special_functions::{ml_decay, ml_decay_envelope, ml_eval, MlParams};

/// Records and traces produced by one campaign.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Fragment {
    pub records: Vec<CheckRecord>,
    pub traces: Vec<TraceFile>,
}

impl Fragment {
    fn extend(&mut self, other: Fragment) {
        self.records.extend(other.records);
        self.traces.extend(other.traces);
    }
}

fn join(params: &[(&str, String)]) -> String {
    params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// Builds the records of one parameter point.
struct Point<'a> {
    campaign: &'a str,
    params: String,
    start: Instant,
    out: Fragment,
}

impl<'a> Point<'a> {
    fn new(campaign: &'a str, params: &[(&str, String)]) -> Self {
        Self {
            campaign,
            params: join(params),
            start: Instant::now(),
            out: Fragment::default(),
        }
    }

    fn record(
        &mut self,
        check: &str,
        measured: f64,
        expected: String,
        tolerance: String,
        pass: bool,
    ) -> &mut CheckRecord {
        self.out.records.push(CheckRecord {
            campaign: self.campaign.to_string(),
            check: check.to_string(),
            params: self.params.clone(),
            measured,
            expected,
            tolerance,
            pass: pass && !measured.is_nan(),
            wall_time: self.start.elapsed().as_secs_f64(),
            detail: None,
        });
        self.out.records.last_mut().unwrap()
    }

    fn detail(
        &mut self,
        check: &str,
        measured: f64,
        expected: String,
        tolerance: String,
        pass: bool,
        detail: String,
    ) {
        self.record(check, measured, expected, tolerance, pass)
            .detail = Some(detail);
    }

    /// A check that could not be evaluated.
    fn failure(&mut self, check: &str, err: &Error) {
        self.detail(
            check,
            f64::NAN,
            "-".into(),
            "-".into(),
            false,
            err.to_string(),
        );
    }

    fn trace(&mut self, result: &SimulationResult) {
        self.out.traces.push(TraceFile {
            name: format!("{}__{}", self.campaign, self.params),
            points: result.trace.clone(),
        });
    }

    fn finish(self) -> Fragment {
        self.out
    }
}

fn short(x: f64) -> String {
    format!("{x}")
}

/// Runs one campaign; a determinism campaign looks up its target in
/// `catalog`. Module errors become failed records.
pub fn run_campaign_in(c: &Campaign, catalog: &[Campaign]) -> Fragment {
    match &c.spec {
        CampaignSpec::InvariantRegion(sw) => invariant_region(c, sw),
        CampaignSpec::Decay(sw) => decay(c, sw),
        CampaignSpec::Blowup(b) => blowup(c, b),
        CampaignSpec::MlTable { table } => ml_table(c, table.as_deref()),
        CampaignSpec::EigenConvergence(e) => eigen_convergence(c, e),
        CampaignSpec::L1Convergence(l) => l1_convergence(c, l),
        CampaignSpec::ScalarBlowup(s) => scalar_blowup(c, s),
        CampaignSpec::Comparison(p) => comparison(c, p),
        CampaignSpec::Determinism { target } => determinism(c, target, catalog),
    }
}

pub fn run_campaign(c: &Campaign) -> Fragment {
    run_campaign_in(c, &[])
}

/// Runs every campaign on a pool of `workers` threads and merges the results
/// in a fixed order.
pub fn run_campaigns(
    campaigns: &[Campaign],
    catalog: &[Campaign],
    workers: usize,
) -> Result<(Report, Vec<TraceFile>)> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Unsupported(format!("cannot start worker pool: {e}")))?;
    let fragments: Vec<Fragment> = pool.install(|| {
        campaigns
            .par_iter()
            .map(|c| run_campaign_in(c, catalog))
            .collect()
    });
    let mut all = Fragment::default();
    for f in fragments {
        all.extend(f);
    }
    all.traces.sort_by(|a, b| a.name.cmp(&b.name));
    Ok((Report::new(all.records), all.traces))
}

/// One discretization per distinct `s`, built in parallel.
fn discretizations(grid: Grid1D, s_values: &[f64]) -> BTreeMap<u64, Result<Discretization>> {
    let mut unique: Vec<f64> = s_values.to_vec();
    unique.sort_by(f64::total_cmp);
    unique.dedup();
    unique
        .par_iter()
        .map(|&s| (s.to_bits(), Discretization::new(grid, s)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

fn sweep_points(sw: &SweepSpec) -> Vec<(Profile, f64, f64)> {
    let mut v = Vec::new();
    for p in &sw.profiles {
        for &a in &sw.alphas {
            for &s in &sw.s_values {
                v.push((p.clone(), a, s));
            }
        }
    }
    v
}

fn sweep_config(sw: &SweepSpec, profile: &Profile, alpha: f64, s: f64) -> SimConfig {
    SimConfig::new(alpha, s, sw.n, sw.dt, sw.t_end, profile.clone())
        .with_domain(sw.domain.0, sw.domain.1)
}

fn sweep_params(profile: &Profile, alpha: f64, s: f64) -> Vec<(&'static str, String)> {
    vec![
        ("alpha", short(alpha)),
        ("s", short(s)),
        ("profile", profile.to_string()),
    ]
}

fn invariant_region(c: &Campaign, sw: &SweepSpec) -> Fragment {
    let tol = c.tolerance("bound");
    let grid = match Grid1D::new(sw.domain.0, sw.domain.1, sw.n) {
        Ok(g) => g,
        Err(e) => return setup_failure(c, &e),
    };
    let discs = discretizations(grid, &sw.s_values);
    let parts: Vec<Fragment> = sweep_points(sw)
        .par_iter()
        .map(|(profile, alpha, s)| {
            let mut pt = Point::new(&c.name, &sweep_params(profile, *alpha, *s));
            let cfg = sweep_config(sw, profile, *alpha, *s);
            let outcome = shared(&discs[&s.to_bits()]).and_then(|d| run_with(&cfg, d));
            match outcome {
                Ok(r) => {
                    let excursion = r
                        .trace
                        .iter()
                        .map(|p| (-p.umin).max(p.umax - 1.0))
                        .fold(0.0f64, f64::max);
                    pt.record(
                        "bounds",
                        excursion,
                        "u in [0, 1]".into(),
                        format!("<= {}", fmt_num(tol)),
                        excursion <= tol && r.blowup.is_none(),
                    );
                    pt.trace(&r);
                }
                Err(e) => pt.failure("bounds", &e),
            }
            pt.finish()
        })
        .collect();
    merge(parts)
}

fn decay(c: &Campaign, sw: &SweepSpec) -> Fragment {
    let slope_tol = c.tolerance("slope");
    let slack = c.tolerance("comparison_slack");
    let grid = match Grid1D::new(sw.domain.0, sw.domain.1, sw.n) {
        Ok(g) => g,
        Err(e) => return setup_failure(c, &e),
    };
    let discs = discretizations(grid, &sw.s_values);
    let parts: Vec<Fragment> = sweep_points(sw)
        .par_iter()
        .map(|(profile, alpha, s)| {
            let alpha = *alpha;
            let mut pt = Point::new(&c.name, &sweep_params(profile, alpha, *s));
            let cfg = sweep_config(sw, profile, alpha, *s);
            let outcome = shared(&discs[&s.to_bits()]).and_then(|d| run_with(&cfg, d));
            let r = match outcome {
                Ok(r) => r,
                Err(e) => {
                    for check in [
                        "decay_slope",
                        "energy_comparison",
                        "decay_slope_vs_two_alpha",
                    ] {
                        pt.failure(check, &e);
                    }
                    return pt.finish();
                }
            };
            let slope = r.decay_slope.unwrap_or(f64::NAN);
            pt.record(
                "decay_slope",
                slope,
                fmt_num(-alpha),
                format!("+-{}%", short(100.0 * slope_tol)),
                (slope + alpha).abs() <= slope_tol * alpha,
            );
            // the energy is quadratic in u, and u itself decays like t^{-alpha}
            pt.record(
                "decay_slope_vs_two_alpha",
                slope,
                fmt_num(-2.0 * alpha),
                format!("+-{}%", short(100.0 * slope_tol)),
                (slope + 2.0 * alpha).abs() <= slope_tol * 2.0 * alpha,
            );
            let e0 = r.trace[0].energy;
            let ratio = r
                .trace
                .iter()
                .map(|p| {
                    let ml = ml_decay(alpha, r.lambda1 * p.t.powf(alpha)).unwrap_or(f64::NAN);
                    p.energy / (e0 * ml)
                })
                .fold(0.0f64, |m, x| {
                    if x.is_nan() || m.is_nan() {
                        f64::NAN
                    } else {
                        m.max(x)
                    }
                });
            pt.record(
                "energy_comparison",
                ratio,
                "E(t) <= (1 + slack) E0 E_alpha(-lambda1 t^alpha)".into(),
                format!("<= {}", fmt_num(1.0 + slack)),
                ratio <= 1.0 + slack,
            );
            pt.trace(&r);
            pt.finish()
        })
        .collect();
    merge(parts)
}

fn blowup(c: &Campaign, b: &BlowupSpec) -> Fragment {
    let stab = c.tolerance("stability");
    let mut jobs = Vec::new();
    for &alpha in &b.alphas {
        for &f in &b.h0_factors {
            jobs.push((alpha, Some(f), None));
        }
        for &t in &b.h0_targets {
            jobs.push((alpha, None, Some(t)));
        }
    }
    let grids = Grid1D::new(b.domain.0, b.domain.1, b.n).and_then(|g| {
        let fine = Grid1D::new(b.domain.0, b.domain.1, 2 * b.n)?;
        Ok((g, fine))
    });
    let (grid, fine) = match grids {
        Ok(g) => g,
        Err(e) => return setup_failure(c, &e),
    };
    let discs: Vec<Result<Discretization>> = [grid, fine]
        .par_iter()
        .map(|g| Discretization::new(*g, b.s))
        .collect();
    let parts: Vec<Fragment> = jobs
        .par_iter()
        .map(|&(alpha, factor, target)| {
            let mut params = vec![("alpha", short(alpha))];
            match (factor, target) {
                (Some(f), _) => params.push(("h0", format!("{}*(1+lambda1)", short(f)))),
                (_, Some(t)) => params.push(("h0", short(t))),
                _ => unreachable!(),
            }
            params.push(("n", b.n.to_string()));
            params.push(("profile", b.profile.to_string()));
            params.push(("s", short(b.s)));
            let mut pt = Point::new(&c.name, &params);
            let checks = [
                "admissible",
                "containment",
                "containment_dt_refined",
                "containment_grid_refined",
                "stability_dt",
                "stability_grid",
            ];
            let (d, d_fine) = match (&discs[0], &discs[1]) {
                (Ok(d), Ok(f)) => (d, f),
                (Err(e), _) | (_, Err(e)) => {
                    checks.iter().for_each(|k| pt.failure(k, e));
                    return pt.finish();
                }
            };
            let lambda1 = d.lambda1();
            let shape = match b.profile.evaluate(d.grid()) {
                Ok(f) => f,
                Err(e) => {
                    checks.iter().for_each(|k| pt.failure(k, &e));
                    return pt.finish();
                }
            };
            let h_shape = d.projection(shape.values());
            let h0 = factor.map_or_else(|| target.unwrap(), |f| f * (1.0 + lambda1));
            let amp = h0 / h_shape;
            let bracket = match blowup_bracket(h0, alpha, lambda1) {
                Ok(br) if h_shape > 0.0 => br,
                Ok(_) => {
                    let e = Error::domain("profile projection", h_shape, "positive");
                    checks.iter().for_each(|k| pt.failure(k, &e));
                    return pt.finish();
                }
                Err(e) => {
                    checks.iter().for_each(|k| pt.failure(k, &e));
                    return pt.finish();
                }
            };
            pt.record(
                "admissible",
                h0 / (1.0 + lambda1),
                "H0/(1+lambda1) >= 1".into(),
                "-".into(),
                bracket.admissible,
            );
            let dt = bracket.upper / b.steps_per_bracket;
            let mut cfg = SimConfig::new(alpha, b.s, b.n, dt, 2.0 * bracket.upper, Profile::Zero)
                .with_domain(b.domain.0, b.domain.1);
            cfg.blow_threshold = b.blow_threshold;
            let scaled = |g: &Grid1D| -> Result<Field> {
                let v = b
                    .profile
                    .evaluate(g)?
                    .into_values()
                    .into_iter()
                    .map(|x| amp * x)
                    .collect();
                Field::new(*g, v)
            };
            let base = scaled(d.grid()).and_then(|u0| run_from(&cfg, d, &u0));
            let half = {
                // a factor of three keeps this run's halving ladder disjoint
                // from the base run's, which would otherwise reproduce it
                let mut c2 = cfg.clone();
                c2.dt = dt / 3.0;
                scaled(d.grid()).and_then(|u0| run_from(&c2, d, &u0))
            };
            let refined = {
                let mut c3 = cfg.clone();
                c3.n = 2 * b.n;
                scaled(d_fine.grid()).and_then(|u0| run_from(&c3, d_fine, &u0))
            };
            let t_star = |r: &SimulationResult| -> Result<(f64, f64, f64, f64)> {
                let ev = r.blowup.ok_or(Error::Inconclusive {
                    t: cfg.t_end,
                    dt: f64::NAN,
                })?;
                let br = blowup_bracket(r.h0, alpha, r.lambda1)?;
                Ok((ev.t_star, br.lower, br.upper, ev.last_change))
            };
            let mut times = Vec::new();
            for (check, r) in [
                ("containment", &base),
                ("containment_dt_refined", &half),
                ("containment_grid_refined", &refined),
            ] {
                match r.as_ref().map_err(|e| e.to_string()).map(&t_star) {
                    Ok(Ok((t, lo, hi, change))) => {
                        pt.detail(
                            check,
                            t,
                            format!("[{}, {}]", fmt_num(lo), fmt_num(hi)),
                            "-".into(),
                            lo <= t && t <= hi,
                            format!("last refinement change {}", fmt_num(change)),
                        );
                        times.push(Some(t));
                    }
                    Ok(Err(e)) => {
                        pt.failure(check, &e);
                        times.push(None);
                    }
                    Err(msg) => {
                        pt.detail(check, f64::NAN, "-".into(), "-".into(), false, msg);
                        times.push(None);
                    }
                }
            }
            for (check, other) in [("stability_dt", times[1]), ("stability_grid", times[2])] {
                match (times[0], other) {
                    (Some(t0), Some(t1)) => {
                        let change = ((t1 - t0) / t0).abs();
                        pt.record(
                            check,
                            change,
                            "0".into(),
                            format!("<= {}", fmt_num(stab)),
                            change <= stab,
                        );
                    }
                    _ => pt.failure(
                        check,
                        &Error::Inconclusive {
                            t: f64::NAN,
                            dt: f64::NAN,
                        },
                    ),
                }
            }
            if let Ok(r) = &base {
                pt.trace(r);
            }
            pt.finish()
        })
        .collect();
    merge(parts)
}

fn ml_table(c: &Campaign, table: Option<&str>) -> Fragment {
    let rel_tol = c.tolerance("relative");
    let ref_tol = c.tolerance("reference");
    let mut pt = Point::new(
        &c.name,
        &[("table", table.unwrap_or("builtin").to_string())],
    );
    let text = match table {
        None => Ok(ML_ORACLE_TABLE.to_string()),
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::io(path, e)),
    };
    let rows = match text.and_then(|t| parse_ml_oracle_table(&t)) {
        Ok(r) => r,
        Err(e) => {
            for k in [
                "max_rel_error",
                "half_order_minus_one",
                "envelope_domination",
            ] {
                pt.failure(k, &e);
            }
            return pt.finish();
        }
    };
    let mut worst = 0.0f64;
    let mut worst_at = (f64::NAN, f64::NAN);
    let mut skipped = 0;
    let mut dominated = 0.0f64;
    for row in &rows {
        let value = MlParams::new(row.alpha, row.z).and_then(ml_eval);
        let Ok(v) = value else {
            skipped += 1;
            continue;
        };
        let rel = ((v - row.value) / row.value).abs();
        if rel > worst || rel.is_nan() {
            worst = rel;
            worst_at = (row.alpha, row.z);
        }
        if row.alpha < 1.0 && row.z <= 0.0 {
            dominated = dominated.max(v / ml_decay_envelope(row.alpha, -row.z));
        }
    }
    pt.detail(
        "max_rel_error",
        worst,
        "0".into(),
        format!("<= {}", fmt_num(rel_tol)),
        worst <= rel_tol && rows.len() > skipped,
        format!(
            "{} rows, {skipped} outside the validated box, worst at alpha={} z={}",
            rows.len(),
            worst_at.0,
            worst_at.1
        ),
    );
    let half = MlParams::new(0.5, -1.0)
        .and_then(ml_eval)
        .unwrap_or(f64::NAN);
    pt.record(
        "half_order_minus_one",
        half,
        "4.275835762e-1".into(),
        format!("+-{}", fmt_num(ref_tol)),
        (half - 0.4275835762).abs() <= ref_tol,
    );
    pt.record(
        "envelope_domination",
        dominated,
        "E_alpha(-z) / envelope <= 1".into(),
        "-".into(),
        dominated <= 1.0,
    );
    pt.finish()
}

fn eigen_convergence(c: &Campaign, e: &EigenSpec) -> Fragment {
    let parts: Vec<Fragment> = e
        .s_values
        .par_iter()
        .map(|&s| {
            let mut pt = Point::new(&c.name, &[("n", e.n.to_string()), ("s", short(s))]);
            if let Err(err) = eigen_checks(c, e, s, &mut pt) {
                pt.failure("setup", &err);
            }
            pt.finish()
        })
        .collect();
    merge(parts)
}

fn eigen_checks(c: &Campaign, e: &EigenSpec, s: f64, pt: &mut Point<'_>) -> Result<()> {
    let grid = Grid1D::new(e.domain.0, e.domain.1, e.n)?;
    let op = assemble_regional(&grid, s)?;
    let tol = |k: &str| c.tolerance(k);

    let asym = op.asymmetry();
    pt.record(
        "symmetry",
        asym,
        "0".into(),
        format!("<= {}", fmt_num(tol("symmetry"))),
        asym <= tol("symmetry"),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(e.seed ^ s.to_bits());
    let probes: Vec<Vec<f64>> = (0..e.probes)
        .map(|_| (0..e.n).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let mut psd = f64::INFINITY;
    for v in &probes {
        let q = op.quadratic_form(v)?;
        psd = psd.min(q / v.iter().map(|x| x * x).sum::<f64>());
    }
    pt.record(
        "psd",
        psd,
        "v'Av/|v|^2 >= 0".into(),
        format!(">= -{}", fmt_num(tol("psd"))),
        psd >= -tol("psd"),
    );

    let aux = assemble_auxiliary(&grid, s)?;
    let ones = aux.apply(&vec![1.0; e.n + 2])?;
    let constants = ones.iter().fold(0.0f64, |m, v| m.max(v.abs())) / aux.max_abs();
    pt.record(
        "constants_annihilated",
        constants,
        "0".into(),
        format!("<= {}", fmt_num(tol("constants"))),
        constants <= tol("constants"),
    );

    let pair = principal_eigenpair(&op, &grid)?;
    let dense = dense_eigenpair(&op, &grid)?;
    let gap = (pair.lambda1 - dense.lambda1).abs() / dense.lambda1;
    pt.detail(
        "oracle_lambda1",
        gap,
        "0".into(),
        format!("<= {}", fmt_num(tol("oracle"))),
        gap <= tol("oracle"),
        format!(
            "lambda1 {} dense {}",
            fmt_num(pair.lambda1),
            fmt_num(dense.lambda1)
        ),
    );
    pt.record(
        "eigenvector_positive",
        pair.e1.min(),
        "> 0".into(),
        "-".into(),
        pair.e1.min() > 0.0,
    );

    let mut poincare = f64::INFINITY;
    for v in &probes {
        let q = op.quadratic_form(v)?;
        let m = pair.lambda1 * v.iter().map(|x| x * x).sum::<f64>();
        poincare = poincare.min((q - m) / m);
    }
    pt.record(
        "poincare",
        poincare,
        "v'Av >= lambda1 |v|^2".into(),
        format!(">= -{}", fmt_num(tol("poincare"))),
        poincare >= -tol("poincare"),
    );

    let lambdas: Vec<Result<f64>> = e
        .n_sequence
        .par_iter()
        .map(|&m| {
            let g = Grid1D::new(e.domain.0, e.domain.1, m)?;
            let a = assemble_regional(&g, s)?;
            Ok(principal_eigenpair(&a, &g)?.lambda1)
        })
        .collect();
    let lambdas: Vec<f64> = lambdas.into_iter().collect::<Result<_>>()?;
    let diffs: Vec<f64> = lambdas.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let ratios: Vec<f64> = diffs.windows(2).map(|w| w[0] / w[1]).collect();
    let worst = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let list = |v: &[f64]| v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(" ");
    pt.detail(
        "cauchy_ratio",
        worst,
        format!(">= {}", short(tol("cauchy_ratio"))),
        "-".into(),
        worst >= tol("cauchy_ratio"),
        format!(
            "n {:?} lambda1 {} ratios {}",
            e.n_sequence,
            list(&lambdas),
            list(&ratios)
        ),
    );
    Ok(())
}

fn l1_convergence(c: &Campaign, l: &L1Spec) -> Fragment {
    let lo_slack = c.tolerance("order_slack_low");
    let hi_slack = c.tolerance("order_slack_high");
    let parts: Vec<Fragment> = l
        .alphas
        .par_iter()
        .map(|&alpha| {
            let mut pt = Point::new(
                &c.name,
                &[
                    ("alpha", short(alpha)),
                    ("k", format!("{}..{}", l.k_min, l.k_max)),
                ],
            );
            let checks = ["monotone", "order_min", "order_max"];
            let exact = match MlParams::new(alpha, -1.0).and_then(ml_eval) {
                Ok(v) => v,
                Err(e) => {
                    checks.iter().for_each(|k| pt.failure(k, &e));
                    return pt.finish();
                }
            };
            let errors: Result<Vec<f64>> = (l.k_min..=l.k_max)
                .map(|k| {
                    let dt = 0.5f64.powi(k as i32);
                    let tr = solve_linear_fode(alpha, 1.0, 1.0, dt, 1.0)?;
                    Ok((tr.last().unwrap().1 - exact).abs())
                })
                .collect();
            let errors = match errors {
                Ok(e) => e,
                Err(e) => {
                    checks.iter().for_each(|k| pt.failure(k, &e));
                    return pt.finish();
                }
            };
            let ratio = errors
                .windows(2)
                .map(|w| w[1] / w[0])
                .fold(0.0f64, f64::max);
            let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
            let lo = alpha - lo_slack;
            let hi = 2.0 - alpha + hi_slack;
            let min = orders.iter().copied().fold(f64::INFINITY, f64::min);
            let max = orders.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let interval = format!("[{}, {}]", fmt_num(lo), fmt_num(hi));
            let orders_text = orders
                .iter()
                .map(|o| fmt_num(*o))
                .collect::<Vec<_>>()
                .join(" ");
            pt.record(
                "monotone",
                ratio,
                "e(dt/2)/e(dt) < 1".into(),
                "-".into(),
                ratio < 1.0,
            );
            pt.detail(
                "order_min",
                min,
                interval.clone(),
                "-".into(),
                min >= lo,
                format!("orders {orders_text}"),
            );
            pt.record("order_max", max, interval, "-".into(), max <= hi);
            pt.finish()
        })
        .collect();
    merge(parts)
}

fn scalar_blowup(c: &Campaign, sb: &ScalarBlowupSpec) -> Fragment {
    let tol = c.tolerance("relative");
    let parts: Vec<Fragment> = sb
        .y0
        .par_iter()
        .map(|&y0| {
            let mut pt = Point::new(&c.name, &[("alpha", "1".into()), ("y0", short(y0))]);
            let exact = (1.0 + 1.0 / y0).ln();
            let t_end = 4.0 * exact;
            let times: Result<Vec<f64>> = sb
                .dts
                .iter()
                .map(|&dt| {
                    solve_logistic_fode(1.0, y0, dt.min(t_end), t_end, &LogisticOptions::default())?
                        .blow_time
                        .ok_or(Error::Inconclusive { t: t_end, dt })
                })
                .collect();
            match times {
                Ok(ts) => {
                    let t = *ts.last().unwrap();
                    let rel = ((t - exact) / exact).abs();
                    pt.detail(
                        "blow_time",
                        t,
                        fmt_num(exact),
                        format!("+-{}%", short(100.0 * tol)),
                        rel <= tol,
                        format!(
                            "dt {:?} times {}",
                            sb.dts,
                            ts.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(" ")
                        ),
                    );
                }
                Err(e) => pt.failure("blow_time", &e),
            }
            pt.finish()
        })
        .collect();
    merge(parts)
}

fn comparison(c: &Campaign, p: &ComparisonSpec) -> Fragment {
    let tol = c.tolerance("order");
    let grid = match Grid1D::new(p.domain.0, p.domain.1, p.n) {
        Ok(g) => g,
        Err(e) => return setup_failure(c, &e),
    };
    let discs = discretizations(grid, &p.s_values);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let seeds: Vec<(u64, u64)> = (0..p.pairs)
        .map(|_| (rng.next_u64(), rng.next_u64()))
        .collect();
    let parts: Vec<Fragment> = seeds
        .par_iter()
        .enumerate()
        .map(|(k, &(upper_seed, scale_seed))| {
            let alpha = p.alphas[k % p.alphas.len()];
            let s = p.s_values[k % p.s_values.len()];
            let mut pt = Point::new(
                &c.name,
                &[
                    ("alpha", short(alpha)),
                    ("pair", format!("{k:03}")),
                    ("s", short(s)),
                ],
            );
            let outcome = (|| -> Result<f64> {
                let d = shared(&discs[&s.to_bits()])?;
                let upper = Profile::Random {
                    seed: upper_seed,
                    lo: 0.0,
                    hi: 1.0,
                }
                .evaluate(d.grid())?;
                let scale = Profile::Random {
                    seed: scale_seed,
                    lo: 0.0,
                    hi: 1.0,
                }
                .evaluate(d.grid())?;
                let lower: Vec<f64> = upper
                    .values()
                    .iter()
                    .zip(scale.values())
                    .map(|(a, b)| a * b)
                    .collect();
                let lower = Field::new(*d.grid(), lower)?;
                let mut cfg = SimConfig::new(alpha, s, p.n, p.dt, p.t_end, Profile::Zero)
                    .with_domain(p.domain.0, p.domain.1);
                cfg.keep_fields = true;
                let ra = run_from(&cfg, d, &lower)?;
                let rb = run_from(&cfg, d, &upper)?;
                if ra.fields.len() != rb.fields.len() {
                    return Err(Error::DimensionMismatch {
                        expected: ra.fields.len(),
                        got: rb.fields.len(),
                    });
                }
                let mut worst = f64::NEG_INFINITY;
                for (fa, fb) in ra.fields.iter().zip(&rb.fields) {
                    for (a, b) in fa.values().iter().zip(fb.values()) {
                        worst = worst.max(a - b);
                    }
                }
                Ok(worst)
            })();
            match outcome {
                Ok(w) => {
                    pt.record(
                        "ordered",
                        w,
                        "max(uA - uB) <= 0".into(),
                        format!("<= {}", fmt_num(tol)),
                        w <= tol,
                    );
                }
                Err(e) => pt.failure("ordered", &e),
            }
            pt.finish()
        })
        .collect();
    merge(parts)
}

fn determinism(c: &Campaign, target: &str, catalog: &[Campaign]) -> Fragment {
    let mut pt = Point::new(&c.name, &[("target", target.to_string())]);
    let Some(t) = catalog.iter().find(|o| o.name == target) else {
        pt.failure(
            "bit_identical",
            &Error::parse(
                format!("campaign `{}`", c.name),
                format!("target `{target}` not found"),
            ),
        );
        return pt.finish();
    };
    let first = run_campaign_in(t, &[]);
    let second = run_campaign_in(t, &[]);
    let lines = |f: &Fragment| Report::new(f.records.clone()).text();
    let (a, b) = (lines(&first), lines(&second));
    let mut differing = a.lines().zip(b.lines()).filter(|(x, y)| x != y).count();
    differing += a.lines().count().abs_diff(b.lines().count());
    differing += first
        .traces
        .iter()
        .zip(&second.traces)
        .filter(|(x, y)| x.csv() != y.csv())
        .count();
    differing += first.traces.len().abs_diff(second.traces.len());
    pt.record(
        "bit_identical",
        differing as f64,
        "0 differing lines".into(),
        "0".into(),
        differing == 0 && !first.records.is_empty(),
    );
    pt.finish()
}

fn setup_failure(c: &Campaign, e: &Error) -> Fragment {
    let mut pt = Point::new(&c.name, &[]);
    pt.failure("setup", e);
    pt.finish()
}

fn shared<T>(r: &Result<T>) -> Result<&T> {
    r.as_ref().map_err(|e| Error::Assembly(e.to_string()))
}

fn merge(parts: Vec<Fragment>) -> Fragment {
    let mut out = Fragment::default();
    for p in parts {
        out.extend(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::parse_config_str;

    fn single(text: &str) -> Vec<Campaign> {
        parse_config_str(text).unwrap()
    }

    #[test]
    fn ml_table_records() {
        let c = single("[ml]\nkind = \"ml_table\"\n");
        let f = run_campaign(&c[0]);
        let names: Vec<&str> = f.records.iter().map(|r| r.check.as_str()).collect();
        assert_eq!(
            names,
            [
                "max_rel_error",
                "half_order_minus_one",
                "envelope_domination"
            ]
        );
        assert!(f.records.iter().all(|r| r.pass), "{:?}", f.records);
    }

    #[test]
    fn missing_table_becomes_failed_records() {
        let c = single("[ml]\nkind = \"ml_table\"\ntable = \"/nonexistent/table.csv\"\n");
        let f = run_campaign(&c[0]);
        assert_eq!(f.records.len(), 3);
        assert!(f.records.iter().all(|r| !r.pass && r.detail.is_some()));
    }

    #[test]
    fn zero_profile_blowup_fails_every_check() {
        let c = single(
            "[b]\nkind = \"blowup\"\nalpha = [1.0]\ns = 0.5\nn = 16\nprofile = \"zero\"\nh0_factors = [2.0]\n",
        );
        let f = run_campaign(&c[0]);
        assert_eq!(f.records.len(), 6);
        assert!(f.records.iter().all(|r| !r.pass));
    }

    #[test]
    fn invariant_region_emits_one_trace_per_run() {
        let c = single(
            "[inv]\nkind = \"invariant_region\"\nalpha = [0.5, 1.0]\ns = [0.5]\nn = 16\ndt = 0.05\nt_end = 1.0\nprofiles = [\"sine(1)\"]\n",
        );
        let f = run_campaign(&c[0]);
        assert_eq!(f.records.len(), 2);
        assert_eq!(f.traces.len(), 2);
        assert!(f.records.iter().all(|r| r.pass && r.check == "bounds"));
    }

    #[test]
    fn determinism_needs_its_target() {
        let text = "[ml]\nkind = \"ml_table\"\n\n[det]\nkind = \"determinism\"\ntarget = \"ml\"\n";
        let all = single(text);
        let det = all.iter().find(|c| c.name == "det").unwrap();
        assert!(run_campaign_in(det, &all).records[0].pass);
        let alone = run_campaign(det);
        assert!(!alone.records[0].pass);
        assert_eq!(alone.records[0].check, "bit_identical");
    }

    #[test]
    fn merged_report_is_sorted_and_worker_independent() {
        let text = "[ml]\nkind = \"ml_table\"\n\n[l1]\nkind = \"l1_convergence\"\nalpha = [0.5]\nk_min = 4\nk_max = 7\n";
        let all = single(text);
        let (one, _) = run_campaigns(&all, &all, 1).unwrap();
        let (four, _) = run_campaigns(&all, &all, 4).unwrap();
        assert_eq!(one.text(), four.text());
        assert!(one.text().starts_with("campaign=l1"));
    }
}
