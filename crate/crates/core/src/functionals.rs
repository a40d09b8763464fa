//! Weighted inner products, energies and Lyapunov functionals.

use crate::error::{Error, Result};
use crate::grid::{derivative, l2_norm_sq, SpatialGrid};
use crate::state::{CoupledState, HeatField, Parameters, WaveField};

/// Weighted inner product on `H¹ × L²`:
///
/// ```text
/// 2 ∫ e^{μx}(u_x + v)(ũ_x + ṽ) + e^{-μx}(u_x - v)(ũ_x - ṽ) dx
/// ```
///
/// The factor 2 multiplies both exponential terms.
pub fn h_inner_product_wave(
    w1: &WaveField,
    w2: &WaveField,
    mu: f64,
    g: &SpatialGrid,
) -> Result<f64> {
    for f in [&w1.u, &w1.v, &w2.u, &w2.v] {
        g.check_len(f, "wave field")?;
    }
    let ux1 = derivative(&w1.u, g)?;
    let ux2 = derivative(&w2.u, g)?;
    let mut acc = 0.0;
    for j in 0..g.len() {
        let x = g.nodes()[j];
        let (ep, em) = ((mu * x).exp(), (-mu * x).exp());
        let plus = (ux1[j] + w1.v[j]) * (ux2[j] + w2.v[j]);
        let minus = (ux1[j] - w1.v[j]) * (ux2[j] - w2.v[j]);
        acc += g.quad_weights()[j] * (ep * plus + em * minus);
    }
    Ok(2.0 * acc)
}

/// `V₁ = ½ ∫ e^{μx}(u_t + u_x)² + e^{-μx}(u_t - u_x)² dx`.
pub fn v1(w: &WaveField, mu: f64, g: &SpatialGrid) -> Result<f64> {
    Ok(0.25 * h_inner_product_wave(w, w, mu, g)?)
}

/// `W₂ = ½‖p‖²`.
pub fn w2(p: &HeatField, g: &SpatialGrid) -> Result<f64> {
    Ok(0.5 * l2_norm_sq(&p.p, g)?)
}

/// `V₂ = ½ ∫ p_x² dx + (c/2) p(0)²`, defined for `c > 0`.
pub fn v2(p: &HeatField, c: f64, g: &SpatialGrid) -> Result<f64> {
    if c <= 0.0 {
        return Err(Error::Parameter(format!(
            "V2 needs a positive Robin coefficient, got c = {c}"
        )));
    }
    let px = derivative(&p.p, g)?;
    Ok(0.5 * l2_norm_sq(&px, g)? + 0.5 * c * p.p[0] * p.p[0])
}

/// `‖u_x‖² + ‖v‖²`, the quantity bracketing V₁ from both sides.
pub fn wave_seminorm_sq(w: &WaveField, g: &SpatialGrid) -> Result<f64> {
    let ux = derivative(&w.u, g)?;
    Ok(l2_norm_sq(&ux, g)? + l2_norm_sq(&w.v, g)?)
}

/// `E = ½ (‖(u, v)‖²_H + ε ‖p‖²)`.
pub fn total_energy(s: &CoupledState, params: &Parameters, g: &SpatialGrid) -> Result<f64> {
    let wave = h_inner_product_wave(&s.wave, &s.wave, params.mu, g)?;
    Ok(0.5 * (wave + params.epsilon * l2_norm_sq(&s.heat.p, g)?))
}

/// Quasi-steady heat profile `p(x) = (d/c + d x) u(1)`.
///
/// This is the unique solution of `p_xx = 0`, `p_x(0) = c p(0)`, `p_x(1) = d u(1)`.
pub fn quasi_steady_state(u1_trace: f64, c: f64, d: f64, g: &SpatialGrid) -> Result<HeatField> {
    if c == 0.0 {
        return Err(Error::Parameter(
            "quasi-steady state is undefined for c = 0".into(),
        ));
    }
    Ok(HeatField {
        p: g.sample(|x| (d / c + d * x) * u1_trace),
    })
}
