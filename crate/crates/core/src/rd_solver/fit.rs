use crate::error::{Error, Result};

/// Least-squares slope of `ln E` against `ln t` over the samples with
/// `t ∈ [t_lo, t_hi]`.
pub fn decay_rate_fit(times: &[f64], energy: &[f64], window: (f64, f64)) -> Result<f64> {
    let (t_lo, t_hi) = window;
    if times.len() != energy.len() {
        return Err(Error::DimensionMismatch {
            expected: times.len(),
            got: energy.len(),
        });
    }
    if !(t_lo > 0.0) || !(t_hi >= 10.0 * t_lo) {
        return Err(Error::DegenerateFit(format!(
            "window [{t_lo}, {t_hi}] must satisfy 0 < t_lo and t_hi >= 10 t_lo"
        )));
    }
    let last = times.last().copied().unwrap_or(f64::NEG_INFINITY);
    if t_hi > last * (1.0 + 1e-9) {
        return Err(Error::DegenerateFit(format!(
            "window end {t_hi} lies beyond the last sample {last}"
        )));
    }
    let mut pts = Vec::new();
    for (&t, &e) in times.iter().zip(energy) {
        if t >= t_lo && t <= t_hi {
            if !(e > 0.0) {
                return Err(Error::DegenerateFit(format!(
                    "non-positive value {e} at t = {t}"
                )));
            }
            pts.push((t.ln(), e.ln()));
        }
    }
    if pts.len() < 8 {
        return Err(Error::DegenerateFit(format!(
            "{} points in window, need 8",
            pts.len()
        )));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}
