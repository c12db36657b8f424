//! Gamma on the narrow real window (0, 3).
//!
//! Evaluated through the fixed-coefficient Taylor expansion of the
//! reciprocal 1/Gamma(1+z) on |z| <= 1 (see `dd::recip_gamma1p`), with one
//! recurrence step Gamma(x) = (x-1) Gamma(x-1) to reach (2, 3). The
//! expansion is double-double accurate, so the f64 result carries full
//! precision everywhere on the window, including the pole approach x -> 0.

use crate::dd::{recip_gamma1p_dd, Dd};
#[cfg(test)]
use crate::dd::recip_gamma1p;

/// Gamma(x) for 0 < x < 3. Callers validate the domain.
///
/// The shift x - 1 (or x - 2) is carried as an exact two_sum: for x near
/// zero, rounding the shift to f64 would lose x itself to cancellation.
pub(crate) fn gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0 && x < 3.0);
    if x <= 2.0 {
        recip_gamma1p_dd(Dd::from_sum(x, -1.0)).recip().to_f64()
    } else {
        recip_gamma1p_dd(Dd::from_sum(x, -2.0))
            .recip()
            .mul_f64(x - 1.0)
            .to_f64()
    }
}

/// Gamma(1+z) on |z| <= 1 in double-double; test oracle helper.
#[cfg(test)]
pub(crate) fn gamma1p_dd(z: f64) -> Dd {
    recip_gamma1p(z).recip()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrence_step_is_consistent() {
        // Gamma(2.4) = 1.4 * Gamma(1.4), both branches must agree
        let a = gamma(2.4);
        let b = 1.4 * gamma(1.4);
        assert!(((a - b) / a).abs() < 1e-15);
    }

    #[test]
    fn pole_approach() {
        // Gamma(x) ~ 1/x - gamma_E + O(x) near zero
        let x = 1e-9;
        let g = gamma(x);
        assert!(((g - (1.0 / x - 0.577_215_664_901_532_9)) / g).abs() < 1e-12);
    }
}

