use super::*;
use crate::caputo_time::{solve_logistic_fode, LogisticOptions};
use crate::special_functions::ml_decay;

fn disc(a: f64, b: f64, n: usize, s: f64) -> Discretization {
    Discretization::new(Grid1D::new(a, b, n).unwrap(), s).unwrap()
}

#[test]
fn zero_data_stays_zero() {
    let cfg = SimConfig::new(0.6, 0.5, 16, 0.05, 2.0, Profile::Zero);
    let r = run(&cfg).unwrap();
    assert!(r.blowup.is_none());
    assert!(r.bracket.is_none());
    assert!(r.trace.iter().all(|p| p.energy == 0.0 && p.h == 0.0));
    assert_eq!(r.trace.len(), 41);
}

#[test]
fn invariant_region_small() {
    for &alpha in &[0.5, 0.8, 1.0] {
        let cfg = SimConfig::new(alpha, 0.4, 32, 0.05, 5.0, Profile::Plateau(0.9));
        let r = run(&cfg).unwrap();
        assert!(r.global_min >= -1e-8 && r.global_max <= 1.0 + 1e-8);
        assert!(r.blowup.is_none());
    }
    // constant one is the unstable equilibrium of the reaction; the
    // boundary pulls it down
    let cfg = SimConfig::new(0.7, 0.6, 24, 0.02, 1.0, Profile::Constant(1.0));
    let r = run(&cfg).unwrap();
    assert!(r.global_max <= 1.0 + 1e-12 && r.global_min >= 0.0);
}

#[test]
fn trace_layout() {
    let cfg = SimConfig::new(0.5, 0.5, 16, 0.001, 5.0, Profile::Sine(0.5));
    let r = run(&cfg).unwrap();
    let t = r.times();
    assert!(t.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(t[0], 0.0);
    assert!((t.last().unwrap() - 5.0).abs() < 1e-9);
    // stride max(1, ⌊5000/2000⌋) = 2
    assert_eq!(r.trace.len(), 2501);
    assert_eq!(r.accepted_steps, 5000);
    assert_eq!(r.bounds().len(), r.energy().len());
    assert_eq!(r.h_functional().len(), r.trace.len());
}

#[test]
fn matches_explicit_reference_in_first_order_limit() {
    // u' = −A u − u + u² integrated with classical RK4 at a 100× smaller step
    let d = disc(0.0, 4.0, 16, 0.95);
    let dt = 2e-4;
    let cfg = SimConfig::new(1.0, 0.95, 16, dt, 1.0, Profile::Sine(0.5));
    let r = run_from(&cfg, &d, &cfg.u0.evaluate(d.grid()).unwrap()).unwrap();
    let u_imex = {
        let mut c = cfg.clone();
        c.keep_fields = true;
        run_with(&c, &d)
            .unwrap()
            .fields
            .pop()
            .unwrap()
            .into_values()
    };
    let rhs = |u: &[f64]| -> Vec<f64> {
        let au = d.op().matvec(u).unwrap();
        u.iter().zip(&au).map(|(v, a)| -a - v + v * v).collect()
    };
    let mut u = cfg.u0.evaluate(d.grid()).unwrap().into_values();
    let h = dt / 100.0;
    let steps = (1.0 / h).round() as usize;
    for _ in 0..steps {
        let k1 = rhs(&u);
        let y: Vec<f64> = u.iter().zip(&k1).map(|(a, k)| a + 0.5 * h * k).collect();
        let k2 = rhs(&y);
        let y: Vec<f64> = u.iter().zip(&k2).map(|(a, k)| a + 0.5 * h * k).collect();
        let k3 = rhs(&y);
        let y: Vec<f64> = u.iter().zip(&k3).map(|(a, k)| a + h * k).collect();
        let k4 = rhs(&y);
        for i in 0..u.len() {
            u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    let scale = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let err = u
        .iter()
        .zip(&u_imex)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(err / scale <= 1e-3, "relative error {}", err / scale);
    assert!((r.trace.last().unwrap().umax - max_of(&u_imex)).abs() < 1e-15);
}

#[test]
fn energy_below_mittag_leffler_comparison() {
    for &alpha in &[0.5, 0.8] {
        let cfg = SimConfig::new(alpha, 0.5, 32, 0.02, 10.0, Profile::Plateau(0.9));
        let r = run(&cfg).unwrap();
        let e0 = r.trace[0].energy;
        for p in &r.trace {
            let bound = 1.05 * e0 * ml_decay(alpha, r.lambda1 * p.t.powf(alpha)).unwrap();
            assert!(p.energy <= bound, "alpha = {alpha}, t = {}", p.t);
        }
    }
}

#[test]
fn jensen_holds_on_every_record() {
    let cfg = SimConfig::new(
        0.7,
        0.3,
        40,
        0.01,
        2.0,
        Profile::Random {
            seed: 5,
            lo: 0.0,
            hi: 1.0,
        },
    );
    let r = run(&cfg).unwrap();
    for p in &r.trace {
        assert!(p.h * p.h <= p.weighted_energy + 1e-10);
    }
}

#[test]
fn order_is_preserved() {
    let d = disc(0.0, 1.0, 24, 0.6);
    let mut cfg = SimConfig::new(0.6, 0.6, 24, 0.02, 2.0, Profile::Zero);
    cfg.keep_fields = true;
    let hi = Profile::Random {
        seed: 1,
        lo: 0.0,
        hi: 1.0,
    }
    .evaluate(d.grid())
    .unwrap();
    let scale = Profile::Random {
        seed: 2,
        lo: 0.0,
        hi: 1.0,
    }
    .evaluate(d.grid())
    .unwrap();
    let lo_vals: Vec<f64> = hi
        .values()
        .iter()
        .zip(scale.values())
        .map(|(a, b)| a * b)
        .collect();
    let lo = Field::new(*d.grid(), lo_vals).unwrap();
    let ra = run_from(&cfg, &d, &lo).unwrap();
    let rb = run_from(&cfg, &d, &hi).unwrap();
    assert_eq!(ra.fields.len(), rb.fields.len());
    for (fa, fb) in ra.fields.iter().zip(&rb.fields) {
        for (a, b) in fa.values().iter().zip(fb.values()) {
            assert!(*a <= b + 1e-8);
        }
    }
}

#[test]
fn homogeneous_blow_up_follows_scalar_comparison() {
    // wide domain, flat data: the centre behaves like u' = u² − u
    let d = disc(0.0, 20.0, 64, 0.5);
    let cfg =
        SimConfig::new(1.0, 0.5, 64, 0.002, 2.0, Profile::Constant(5.0)).with_domain(0.0, 20.0);
    let r = run_with(&cfg, &d).unwrap();
    let event = r.blowup.expect("blow-up");
    assert!(event.terminal_max >= cfg.blow_threshold);
    let shifted = r.h0 - (1.0 + r.lambda1);
    assert!(shifted > 0.0);
    let scalar = solve_logistic_fode(1.0, shifted, 1e-4, 2.0, &LogisticOptions::default())
        .unwrap()
        .blow_time
        .unwrap();
    assert!(
        ((event.t_star - scalar) / scalar).abs() < 0.1,
        "{} vs {scalar}",
        event.t_star
    );
    assert!(event.last_change < 0.01);
}

#[test]
fn blow_up_inside_bracket() {
    let d = disc(0.0, 1.0, 32, 0.5);
    let lambda1 = d.lambda1();
    let mut cfg = SimConfig::new(0.8, 0.5, 32, 0.001, 1.0, Profile::Sine(1.0));
    let amp = 10.0 * (1.0 + lambda1)
        / d.projection(&Profile::Sine(1.0).evaluate(d.grid()).unwrap().into_values());
    cfg.u0 = Profile::Sine(amp);
    cfg.blow_threshold = 1e6;
    let upper = blowup_bracket(10.0 * (1.0 + lambda1), 0.8, lambda1)
        .unwrap()
        .upper;
    cfg.t_end = 2.0 * upper;
    cfg.dt = upper / 200.0;
    let r = run_with(&cfg, &d).unwrap();
    let b = r.bracket.expect("admissible");
    assert!((b.h0 - 10.0 * (1.0 + lambda1)).abs() < 1e-9 * b.h0);
    let t = r.blowup.unwrap().t_star;
    assert!(b.contains(t), "{t} outside [{}, {}]", b.lower, b.upper);
}

#[test]
fn decay_slope_attached_for_long_bounded_runs() {
    let cfg = SimConfig::new(0.5, 0.5, 16, 0.1, 100.0, Profile::Sine(0.5));
    let r = run(&cfg).unwrap();
    let slope = r.decay_slope.expect("slope");
    assert!(slope < 0.0);
    let short = run(&SimConfig::new(0.5, 0.5, 16, 0.1, 5.0, Profile::Sine(0.5))).unwrap();
    assert!(short.decay_slope.is_none());
}

#[test]
fn collapse_is_reported() {
    let mut cfg = SimConfig::new(1.0, 0.5, 16, 0.01, 1.0, Profile::Constant(50.0));
    cfg.dt_floor = Some(0.004);
    assert!(matches!(run(&cfg), Err(Error::Inconclusive { .. })));
}

#[test]
fn mismatched_inputs_rejected() {
    let d = disc(0.0, 1.0, 16, 0.5);
    let cfg = SimConfig::new(0.5, 0.5, 17, 0.1, 1.0, Profile::Zero);
    assert!(run_with(&cfg, &d).is_err());
    let mut bad = SimConfig::new(0.5, 0.5, 16, 0.1, 1.0, Profile::Zero);
    bad.alpha = 2.0;
    assert!(matches!(run_with(&bad, &d), Err(Error::Range { .. })));
}

#[test]
fn repeated_runs_are_bitwise_identical() {
    let cfg = SimConfig::new(
        0.6,
        0.4,
        300,
        0.05,
        5.0,
        Profile::Random {
            seed: 9,
            lo: 0.0,
            hi: 1.0,
        },
    );
    let d = Discretization::for_config(&cfg).unwrap();
    let a = run_with(&cfg, &d).unwrap();
    let b = run_with(&cfg, &d).unwrap();
    assert_eq!(a, b);
}
