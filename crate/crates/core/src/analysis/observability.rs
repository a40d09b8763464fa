use crate::error::{Error, Result};
use crate::solvers::{LayerRun, ReducedRun};
use crate::state::Parameters;
use crate::validator::q_of;

/// Fraction of the horizon inspected for a growth trend.
const TAIL_FRACTION: f64 = 0.2;
/// Relative growth over the tail still counted as flat.
const FLAT_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct ObservabilityReport {
    /// `q(a, μ)`.
    pub q: f64,
    /// `(t, I(t))` with `I(t) = ∫₀ᵗ e^{-μ(t-s)/2} |ū_t(1, s)|² ds`.
    pub integral: Vec<(f64, f64)>,
    /// `sup_t q I(t) e^{μt/2} / ‖(ū₀, ū₁)‖²`, zero for zero data.
    pub kappa: f64,
    /// Whether `q I(t) e^{μt/2}` grows by at most 5% over the last fifth of the horizon.
    pub flat: bool,
}

/// Weighted boundary-velocity integral of a reduced run and its empirical constant.
pub fn observability_integral(run: &ReducedRun, params: &Parameters) -> Result<ObservabilityReport> {
    let q = q_of(params.a, params.mu);
    if !(q > 0.0) {
        return Err(Error::Precondition(format!(
            "observability integral needs q(a, mu) > 0, got {q}"
        )));
    }
    let half_mu = 0.5 * params.mu;
    let mut integral = Vec::with_capacity(run.trace.len());
    // J(t) = I(t) e^{μt/2} = ∫₀ᵗ e^{μs/2} |ū_t(1, s)|² ds, accumulated by the trapezoid rule
    let mut weighted = Vec::with_capacity(run.trace.len());
    let mut j = 0.0;
    for (k, &(t, ut)) in run.trace.iter().enumerate() {
        if k > 0 {
            let (tp, utp) = run.trace[k - 1];
            j += 0.5 * (t - tp) * ((half_mu * tp).exp() * utp * utp + (half_mu * t).exp() * ut * ut);
        }
        integral.push((t, j * (-half_mu * t).exp()));
        weighted.push((t, q * j));
    }
    let sup = weighted.iter().map(|w| w.1).fold(0.0, f64::max);
    let kappa = if sup == 0.0 {
        0.0
    } else {
        sup / run.initial_norm_sq
    };
    let flat = match (run.trace.first(), run.trace.last()) {
        (Some(&(t0, _)), Some(&(t1, _))) if sup > 0.0 => {
            let t_tail = t1 - TAIL_FRACTION * (t1 - t0);
            let start = weighted
                .iter()
                .find(|w| w.0 >= t_tail)
                .map_or(0.0, |w| w.1);
            let end = weighted.last().map_or(0.0, |w| w.1);
            end - start <= FLAT_TOLERANCE * end
        }
        _ => true,
    };
    Ok(ObservabilityReport {
        q,
        integral,
        kappa,
        flat,
    })
}

/// One sample of the layer trace bound `|p̄(0, τ)|² ≤ c⁻¹ e^{-π²τ/4} ‖p̄₀‖²_{H¹}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceVerdict {
    pub tau: f64,
    pub trace_sq: f64,
    pub bound: f64,
    pub satisfied: bool,
}

pub fn boundary_layer_trace_check(run: &LayerRun, c: f64, p0_h1_norm_sq: f64) -> Vec<TraceVerdict> {
    let rate = std::f64::consts::PI.powi(2) / 4.0;
    run.trace
        .iter()
        .map(|&(tau, p0)| {
            let trace_sq = p0 * p0;
            let bound = (-rate * tau).exp() * p0_h1_norm_sq / c;
            TraceVerdict {
                tau,
                trace_sq,
                bound,
                satisfied: trace_sq <= bound,
            }
        })
        .collect()
}
