//! Named initial-data profiles, written `name(p1, p2, ...)`.
//!
//! Profiles are functions of the normalized coordinate `ξ = (x − a)/(b − a)`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::frac_laplacian::{Field, Grid1D};

#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Zero,
    Constant(f64),
    /// `amp·sin(πξ)`.
    Sine(f64),
    /// `amp·min(1, 20ξ(1 − ξ))`.
    Plateau(f64),
    /// `amp·exp(−((ξ − center)/width)²)`.
    Bump {
        amp: f64,
        center: f64,
        width: f64,
    },
    /// `amp` on `[lo, hi]`, zero elsewhere.
    Step {
        amp: f64,
        lo: f64,
        hi: f64,
    },
    /// `amp·(1 − |2ξ − 1|)`.
    Tent(f64),
    /// Independent uniform values in `[lo, hi]` from a seeded generator.
    Random {
        seed: u64,
        lo: f64,
        hi: f64,
    },
}

impl Profile {
    pub fn evaluate(&self, grid: &Grid1D) -> Result<Field> {
        let len = grid.b() - grid.a();
        let xi = |x: f64| (x - grid.a()) / len;
        match *self {
            Profile::Zero => Ok(Field::zeros(*grid)),
            Profile::Constant(c) => Field::from_fn(*grid, |_| c),
            Profile::Sine(amp) => {
                Field::from_fn(*grid, |x| amp * (std::f64::consts::PI * xi(x)).sin())
            }
            Profile::Plateau(amp) => Field::from_fn(*grid, |x| {
                let t = xi(x);
                amp * (20.0 * t * (1.0 - t)).min(1.0)
            }),
            Profile::Bump { amp, center, width } => {
                Field::from_fn(*grid, |x| amp * (-((xi(x) - center) / width).powi(2)).exp())
            }
            Profile::Step { amp, lo, hi } => Field::from_fn(*grid, |x| {
                let t = xi(x);
                if (lo..=hi).contains(&t) {
                    amp
                } else {
                    0.0
                }
            }),
            Profile::Tent(amp) => {
                Field::from_fn(*grid, |x| amp * (1.0 - (2.0 * xi(x) - 1.0).abs()))
            }
            Profile::Random { seed, lo, hi } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Field::new(
                    *grid,
                    (0..grid.n()).map(|_| rng.gen_range(lo..=hi)).collect(),
                )
            }
        }
    }

    /// Bounds `(lo, hi)` on the profile values.
    pub fn range(&self) -> (f64, f64) {
        match *self {
            Profile::Zero => (0.0, 0.0),
            Profile::Constant(c) => (c, c),
            Profile::Sine(a) | Profile::Plateau(a) | Profile::Tent(a) => (a.min(0.0), a.max(0.0)),
            Profile::Bump { amp, .. } | Profile::Step { amp, .. } => (amp.min(0.0), amp.max(0.0)),
            Profile::Random { lo, hi, .. } => (lo, hi),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Zero => write!(f, "zero"),
            Profile::Constant(c) => write!(f, "constant({c})"),
            Profile::Sine(a) => write!(f, "sine({a})"),
            Profile::Plateau(a) => write!(f, "plateau({a})"),
            Profile::Bump { amp, center, width } => write!(f, "bump({amp}, {center}, {width})"),
            Profile::Step { amp, lo, hi } => write!(f, "step({amp}, {lo}, {hi})"),
            Profile::Tent(a) => write!(f, "tent({a})"),
            Profile::Random { seed, lo, hi } => write!(f, "random({seed}, {lo}, {hi})"),
        }
    }
}

fn number(name: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw.trim().parse().map_err(|_| {
        Error::parse(
            format!("profile `{name}`"),
            format!("`{}` is not a number", raw.trim()),
        )
    })?;
    if !v.is_finite() {
        return Err(Error::parse(
            format!("profile `{name}`"),
            "parameters must be finite",
        ));
    }
    Ok(v)
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let (name, args) = match text.find('(') {
            None => (text, Vec::new()),
            Some(open) => {
                let inner = text[open + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::parse("profile", format!("missing `)` in `{text}`")))?;
                let args = if inner.trim().is_empty() {
                    Vec::new()
                } else {
                    inner.split(',').collect()
                };
                (text[..open].trim(), args)
            }
        };
        let arity = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(Error::parse(
                    format!("profile `{name}`"),
                    format!("expected {n} parameters, got {}", args.len()),
                ))
            }
        };
        let p = |i: usize| number(name, args[i]);
        let profile = match name {
            "zero" => {
                arity(0)?;
                Profile::Zero
            }
            "constant" => {
                arity(1)?;
                Profile::Constant(p(0)?)
            }
            "sine" => {
                arity(1)?;
                Profile::Sine(p(0)?)
            }
            "plateau" => {
                arity(1)?;
                Profile::Plateau(p(0)?)
            }
            "tent" => {
                arity(1)?;
                Profile::Tent(p(0)?)
            }
            "bump" => {
                arity(3)?;
                let width = p(2)?;
                if !(width > 0.0) {
                    return Err(Error::parse("profile `bump`", "width must be positive"));
                }
                Profile::Bump {
                    amp: p(0)?,
                    center: p(1)?,
                    width,
                }
            }
            "step" => {
                arity(3)?;
                let (lo, hi) = (p(1)?, p(2)?);
                if !(lo <= hi) {
                    return Err(Error::parse("profile `step`", "requires lo <= hi"));
                }
                Profile::Step { amp: p(0)?, lo, hi }
            }
            "random" => {
                arity(3)?;
                let seed = args[0].trim().parse::<u64>().map_err(|_| {
                    Error::parse(
                        "profile `random`",
                        format!("seed `{}` is not an unsigned integer", args[0].trim()),
                    )
                })?;
                let (lo, hi) = (p(1)?, p(2)?);
                if !(lo <= hi) {
                    return Err(Error::parse("profile `random`", "requires lo <= hi"));
                }
                Profile::Random { seed, lo, hi }
            }
            other => {
                return Err(Error::parse(
                    "profile",
                    format!("unknown profile `{other}`"),
                ))
            }
        };
        Ok(profile)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid() -> Grid1D {
        Grid1D::new(2.0, 4.0, 9).unwrap()
    }

    #[test]
    fn parses_every_form() {
        let cases = [
            "zero",
            "constant(0.5)",
            "sine(2)",
            "plateau(0.9)",
            "bump(1, 0.5, 0.1)",
            "step(0.7, 0.2, 0.6)",
            "tent(1)",
            "random(42, 0, 1)",
        ];
        for c in cases {
            let p: Profile = c.parse().unwrap();
            let again: Profile = p.to_string().parse().unwrap();
            assert_eq!(p, again);
        }
        assert_eq!(
            " sine( 3 ) ".parse::<Profile>().unwrap(),
            Profile::Sine(3.0)
        );
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "",
            "sine",
            "sine(1, 2)",
            "sine(x)",
            "sine(1",
            "bump(1, 0.5, 0)",
            "step(1, 0.6, 0.2)",
            "random(-1, 0, 1)",
            "wave(1)",
            "constant(inf)",
        ] {
            assert!(bad.parse::<Profile>().is_err(), "{bad}");
        }
    }

    #[test]
    fn values_use_normalized_coordinate() {
        let g = grid();
        let s = Profile::Sine(2.0).evaluate(&g).unwrap();
        assert!((s.values()[4] - 2.0).abs() < 1e-15);
        let t = Profile::Tent(1.0).evaluate(&g).unwrap();
        assert!((t.values()[0] - 0.2).abs() < 1e-14);
        let p = Profile::Plateau(0.9).evaluate(&g).unwrap();
        assert_eq!(p.values()[0], 0.9);
        let q = Profile::Plateau(1.0)
            .evaluate(&Grid1D::new(0.0, 1.0, 99).unwrap())
            .unwrap();
        assert!((q.values()[0] - 20.0 * 0.01 * 0.99).abs() < 1e-14);
        let st = Profile::Step {
            amp: 1.0,
            lo: 0.25,
            hi: 0.55,
        }
        .evaluate(&g)
        .unwrap();
        assert_eq!(st.values(), &[0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn random_is_seeded() {
        let g = grid();
        let a = Profile::Random {
            seed: 3,
            lo: 0.0,
            hi: 1.0,
        }
        .evaluate(&g)
        .unwrap();
        let b = Profile::Random {
            seed: 3,
            lo: 0.0,
            hi: 1.0,
        }
        .evaluate(&g)
        .unwrap();
        let c = Profile::Random {
            seed: 4,
            lo: 0.0,
            hi: 1.0,
        }
        .evaluate(&g)
        .unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    proptest! {
        #[test]
        fn values_within_declared_range(amp in -3.0f64..3.0, seed in any::<u64>()) {
            let g = grid();
            for p in [
                Profile::Sine(amp),
                Profile::Plateau(amp),
                Profile::Tent(amp),
                Profile::Bump { amp, center: 0.3, width: 0.2 },
                Profile::Random { seed, lo: amp.min(0.0), hi: amp.max(0.0) },
            ] {
                let (lo, hi) = p.range();
                let f = p.evaluate(&g).unwrap();
                prop_assert!(f.min() >= lo - 1e-15 && f.max() <= hi + 1e-15);
            }
        }

        #[test]
        fn parser_never_panics(text in ".{0,40}") {
            let _ = text.parse::<Profile>();
        }
    }
}
