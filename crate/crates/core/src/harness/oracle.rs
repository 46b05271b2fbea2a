use crate::error::{Error, Result};

/// The Mittag-Leffler reference table shipped with the crate.
pub const ML_ORACLE_TABLE: &str = include_str!("../../data/ml_oracle.csv");

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRow {
    pub alpha: f64,
    pub z: f64,
    pub value: f64,
}

/// Parses `alpha,z,value` lines; `#` starts a comment line.
pub fn parse_ml_oracle_table(text: &str) -> Result<Vec<OracleRow>> {
    let mut rows = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let ctx = || format!("oracle table line {}", k + 1);
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::parse(
                ctx(),
                format!("expected 3 fields, got {}", fields.len()),
            ));
        }
        let mut nums = [0.0; 3];
        for (slot, f) in nums.iter_mut().zip(&fields) {
            *slot = f
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::parse(ctx(), format!("`{f}` is not a finite number")))?;
        }
        if !(nums[0] > 0.0 && nums[0] <= 1.0) {
            return Err(Error::parse(
                ctx(),
                format!("alpha {} outside (0, 1]", nums[0]),
            ));
        }
        rows.push(OracleRow {
            alpha: nums[0],
            z: nums[1],
            value: nums[2],
        });
    }
    Ok(rows)
}
