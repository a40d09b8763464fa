//! Decay-rate fits, spectra, the small-ε approximation sweep and the claim audit.

mod audit;
mod fit;
mod observability;
mod spectrum;
mod tikhonov;

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

pub use audit::{claim_audit, AuditEntry, AuditReport, Verdict, CLAIM_IDS, ORACLE_TOLERANCE, RATE_TOLERANCE};
pub use fit::{fit_decay_rate, log_log_slope, RateFit, FIT_FLOOR, MIN_FIT_SAMPLES};
pub use observability::{
    boundary_layer_trace_check, observability_integral, ObservabilityReport, TraceVerdict,
};
pub use spectrum::{spectral_abscissa, Spectrum, MAX_SPECTRUM_DIM};
pub use tikhonov::{
    comparison_steps, tikhonov_sweep, TikhonovPoint, TikhonovProfiles, TikhonovSweep,
    COMPARISON_SAMPLES,
};

/// Root of `k tan k = c` in `(0, π/2)`.
///
/// `-k²` is the slowest eigenvalue of `p_xx` with `p_x(0) = c p(0)`, `p_x(1) = 0`,
/// so `‖p̄‖²` decays at rate `2k²`.
pub fn robin_root(c: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Parameter(format!("need c > 0, got {c}")));
    }
    let (mut lo, mut hi) = (0.0f64, FRAC_PI_2);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid.tan() < c {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn robin_root_values() {
        let k = robin_root(4.0).unwrap();
        assert!((k * k.tan() - 4.0).abs() < 1e-10);
        assert!((k - 1.2646).abs() < 1e-4);
        assert!((2.0 * k * k - 3.198).abs() < 1e-3);
        assert!(robin_root(0.0).is_err());
        // large c approaches the Dirichlet-Neumann value π/2
        assert!(robin_root(1e8).unwrap() > FRAC_PI_2 - 1e-6);
    }
}
