//! Algebraic envelope C_α/(1 + z) dominating E_α(−z) on z ≥ 0.
//!
//! The constants C_α are calibrated once against [`ml_eval`] on the
//! validated argument range and shipped as a plain-text table
//! (`data/envelope_table.txt`, one `alpha, C_alpha` pair per line). Between
//! table entries the larger neighbouring constant is used. Outside the
//! calibrated range the analytic bound E_α(−z) ≤ 1/(1 + z/Γ(1 + α)) ≤ 1/(1 + z)
//! applies, i.e. C_α = 1.

use std::sync::OnceLock;

use super::mittag_leffler::{ml_eval, MlParams, ML_ALPHA_MIN, ML_Z_MIN};
use crate::error::{Error, Result};

/// Orders at which the shipped envelope table is calibrated.
pub const ENVELOPE_ALPHAS: [f64; 16] = [
    0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 0.99,
];

const SHIPPED_TABLE: &str = include_str!("../../data/envelope_table.txt");
const CALIBRATION_POINTS: usize = 2001;

fn shipped() -> &'static [(f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        parse_envelope_table(SHIPPED_TABLE).expect("shipped envelope table is well-formed")
    })
}

/// C_α for `0 < α < 1`.
pub fn envelope_constant(alpha: f64) -> f64 {
    let table = shipped();
    match table.iter().position(|&(a, _)| a >= alpha) {
        Some(0) if table[0].0 > alpha => 1.0,
        Some(0) => table[0].1,
        Some(i) if table[i].0 == alpha => table[i].1,
        Some(i) => table[i - 1].1.max(table[i].1),
        None => 1.0,
    }
}

/// C_α/(1 + z), an upper bound for E_α(−z).
///
/// # Panics
///
/// If `alpha` is outside (0, 1) or `z` is negative.
pub fn ml_decay_envelope(alpha: f64, z: f64) -> f64 {
    assert!(
        alpha > 0.0 && alpha < 1.0,
        "alpha must lie in (0, 1), got {alpha}"
    );
    assert!(z >= 0.0, "z must be non-negative, got {z}");
    envelope_constant(alpha) / (1.0 + z)
}

/// Recomputes C_α = max(1, sup_z (1 + z)·E_α(−z)) over a uniform grid of
/// `z ∈ [0, 50]` for each requested order (each at least 0.25).
pub fn calibrate_envelope(alphas: &[f64]) -> Result<Vec<(f64, f64)>> {
    let z_max = -ML_Z_MIN;
    alphas
        .iter()
        .map(|&alpha| {
            if !(ML_ALPHA_MIN..1.0).contains(&alpha) {
                return Err(Error::domain("alpha", alpha, "0.25 <= alpha < 1"));
            }
            let mut c: f64 = 1.0;
            for i in 0..CALIBRATION_POINTS {
                let z = z_max * i as f64 / (CALIBRATION_POINTS - 1) as f64;
                let e = ml_eval(MlParams::new(alpha, -z)?)?;
                c = c.max((1.0 + z) * e);
            }
            Ok((alpha, c))
        })
        .collect()
}

pub fn format_envelope_table(rows: &[(f64, f64)]) -> String {
    let mut out =
        String::from("# alpha, C_alpha: E_alpha(-z) <= C_alpha / (1 + z) for z in [0, 50]\n");
    for (a, c) in rows {
        out.push_str(&format!("{a}, {c:.14e}\n"));
    }
    out
}

/// Parses an envelope table. Blank lines and `#` comments are ignored; rows
/// must have strictly increasing `alpha` in (0, 1) and `C_alpha ≥ 1`.
pub fn parse_envelope_table(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut rows: Vec<(f64, f64)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let ctx = || format!("envelope table line {}", lineno + 1);
        let mut fields = line.split(',').map(str::trim);
        let (Some(a), Some(c), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::parse(ctx(), "expected `alpha, C_alpha`"));
        };
        let a: f64 = a
            .parse()
            .map_err(|_| Error::parse(ctx(), format!("invalid alpha `{a}`")))?;
        let c: f64 = c
            .parse()
            .map_err(|_| Error::parse(ctx(), format!("invalid C_alpha `{c}`")))?;
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::parse(ctx(), format!("alpha {a} outside (0, 1)")));
        }
        if !(c >= 1.0) || !c.is_finite() {
            return Err(Error::parse(
                ctx(),
                format!("C_alpha {c} must be finite and >= 1"),
            ));
        }
        if let Some(&(prev, _)) = rows.last() {
            if a <= prev {
                return Err(Error::parse(
                    ctx(),
                    "alpha values must be strictly increasing",
                ));
            }
        }
        rows.push((a, c));
    }
    Ok(rows)
}
