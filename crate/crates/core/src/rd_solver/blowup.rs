use crate::error::{Error, Result};
use crate::special_functions::gamma_positive;

/// Two-sided estimate of the blow-up time from the initial projection
/// `H₀ = ∫u₀e₁` on the principal eigenfunction:
///
/// ```text
/// (Γ(α+1) / (4(H₀ + 1/2)))^{1/α} ≤ T* ≤ (Γ(α+1) / H₀)^{1/α}
/// ```
///
/// valid when `H₀ ≥ 1 + λ₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupBracket {
    pub h0: f64,
    pub lower: f64,
    pub upper: f64,
    pub admissible: bool,
}

impl BlowupBracket {
    pub fn contains(&self, t: f64) -> bool {
        self.lower <= t && t <= self.upper
    }
}

pub fn blowup_bracket(h0: f64, alpha: f64, lambda1: f64) -> Result<BlowupBracket> {
    if !(h0 > 0.0) || !h0.is_finite() {
        return Err(Error::domain("h0", h0, "finite h0 > 0"));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain("alpha", alpha, "0 < alpha <= 1"));
    }
    let g = gamma_positive(alpha + 1.0);
    let inv = 1.0 / alpha;
    Ok(BlowupBracket {
        h0,
        lower: (g / (4.0 * (h0 + 0.5))).powf(inv),
        upper: (g / h0).powf(inv),
        admissible: h0 >= 1.0 + lambda1,
    })
}

/// A detected blow-up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupEvent {
    /// First mesh time with `max u ≥ blow_threshold`.
    pub t_star: f64,
    pub terminal_max: f64,
    /// Initial step of the run that produced `t_star`.
    pub dt: f64,
    /// Number of dt halvings performed by the refinement.
    pub refinements: usize,
    /// Relative change of `t_star` under the last halving.
    pub last_change: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_examples() {
        let b = blowup_bracket(2.0, 1.0, 0.5).unwrap();
        assert!((b.lower - 0.1).abs() < 1e-15);
        assert!((b.upper - 0.5).abs() < 1e-15);
        assert!(b.admissible);
        let b = blowup_bracket(1.0, 1.0, 0.5).unwrap();
        assert!((b.lower - 1.0 / 6.0).abs() < 1e-15);
        assert!((b.upper - 1.0).abs() < 1e-15);
        assert!(!b.admissible);
        assert!(b.contains(0.5) && !b.contains(1.5));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(blowup_bracket(0.0, 1.0, 0.5).is_err());
        assert!(blowup_bracket(-1.0, 1.0, 0.5).is_err());
        assert!(blowup_bracket(1.0, 0.0, 0.5).is_err());
    }

    proptest! {
        #[test]
        fn lower_below_upper(h0 in 1e-3f64..1e3, alpha in 0.05f64..=1.0) {
            let b = blowup_bracket(h0, alpha, 0.0).unwrap();
            prop_assert!(b.lower < b.upper);
        }
    }
}
