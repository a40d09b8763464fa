use std::f64::consts::PI;

use rayon::prelude::*;

use super::fit::log_log_slope;
use crate::error::{Error, Result};
use crate::functionals::quasi_steady_state;
use crate::grid::{h1_norm_sq, l2_norm_sq, SpatialGrid};
use crate::solvers::{
    simulate_boundary_layer_sampled, simulate_coupled_observed, simulate_reduced_observed,
    SimulationConfig,
};
use crate::state::{CoupledState, HeatField, WaveField};
use crate::validator::check_theorem_1_4;

/// Number of comparison instants on `[0, t_final]`.
pub const COMPARISON_SAMPLES: usize = 50;

/// Shapes of the reduced and layer initial data, sampled on the grid.
///
/// For a given ε the data are `ū₀ = ε^{3/2} φ`, `ū₁ = ε^{3/2} ψ`, `p̄₀ = ε χ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TikhonovProfiles {
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    pub chi: Vec<f64>,
}

impl TikhonovProfiles {
    /// `φ = ψ ∝ sin(πx/2)` with unit H¹ and L² norm respectively, `χ ∝ cos(πx)` with unit H¹ norm.
    pub fn default_on(g: &SpatialGrid) -> Result<Self> {
        let s = g.sample(|x| (PI * x / 2.0).sin());
        let c = g.sample(|x| (PI * x).cos());
        let normalized = |f: &[f64], n2: f64| f.iter().map(|v| v / n2.sqrt()).collect::<Vec<_>>();
        Ok(Self {
            phi: normalized(&s, h1_norm_sq(&s, g)?),
            psi: normalized(&s, l2_norm_sq(&s, g)?),
            chi: normalized(&c, h1_norm_sq(&c, g)?),
        })
    }

    pub fn zero(g: &SpatialGrid) -> Self {
        Self {
            phi: vec![0.0; g.len()],
            psi: vec![0.0; g.len()],
            chi: vec![0.0; g.len()],
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        let sc = |f: &[f64]| f.iter().map(|v| s * v).collect();
        Self {
            phi: sc(&self.phi),
            psi: sc(&self.psi),
            chi: sc(&self.chi),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TikhonovPoint {
    pub epsilon: f64,
    /// `sup_t e^{μt/8} (‖u - ū‖_{H¹} + ‖u_t - ū_t‖)`.
    pub e_u_max_weighted: f64,
    /// `sup_t e^{μt/8} ‖p - p̄(·, t/ε) - (d/c + d x) ū(1, t)‖`.
    pub e_p_max_weighted: f64,
    pub t_grid: Vec<f64>,
    /// Unweighted errors at each comparison instant.
    pub e_u: Vec<f64>,
    pub e_p: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TikhonovSweep {
    /// One point per ε, in decreasing ε.
    pub points: Vec<TikhonovPoint>,
    /// Log-log slope of the weighted wave error against ε; `None` if any error is zero.
    pub slope_u: Option<f64>,
    pub slope_p: Option<f64>,
    pub notes: Vec<String>,
}

/// Step indices of `COMPARISON_SAMPLES` near-uniform instants among `0..=n_steps`.
pub fn comparison_steps(n_steps: usize) -> Vec<usize> {
    let m = COMPARISON_SAMPLES - 1;
    let mut steps: Vec<usize> = (0..=m)
        .map(|i| ((i * n_steps) as f64 / m as f64).round() as usize)
        .collect();
    steps.dedup();
    steps
}

/// Compares the full system against its reduced plus boundary-layer approximation for each ε.
///
/// The ε values run in parallel; each run is deterministic so the result does not depend
/// on scheduling.
pub fn tikhonov_sweep(
    base: &SimulationConfig,
    eps_list: &[f64],
    profiles: &TikhonovProfiles,
) -> Result<TikhonovSweep> {
    base.validate()?;
    let report = check_theorem_1_4(&base.params);
    if !report.all_satisfied {
        let failed: Vec<&str> = report
            .conditions
            .iter()
            .filter(|c| !c.satisfied)
            .map(|c| c.label.as_str())
            .collect();
        return Err(Error::Config(format!(
            "parameters fail the approximation hypotheses: {}",
            failed.join("; ")
        )));
    }
    if eps_list.len() < 3 {
        return Err(Error::Config("eps_list needs at least 3 values".into()));
    }
    if eps_list.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::Config("eps_list values must be positive".into()));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Config("eps_list must be strictly decreasing".into()));
    }
    for (f, name) in [(&profiles.phi, "phi"), (&profiles.psi, "psi"), (&profiles.chi, "chi")] {
        base.grid.check_len(f, name)?;
    }

    let mut points = eps_list
        .par_iter()
        .map(|&eps| sweep_point(base, eps, profiles))
        .collect::<Result<Vec<_>>>()?;
    points.sort_by(|a, b| b.epsilon.total_cmp(&a.epsilon));
    let fit = |f: fn(&TikhonovPoint) -> f64| {
        log_log_slope(&points.iter().map(|p| (p.epsilon, f(p))).collect::<Vec<_>>())
    };
    let slope_u = fit(|p| p.e_u_max_weighted);
    let slope_p = fit(|p| p.e_p_max_weighted);
    Ok(TikhonovSweep {
        points,
        slope_u,
        slope_p,
        notes: vec![
            "temperature correction uses the reduced displacement u(1, t); the statement of the \
             approximation result prints the velocity u_t(1, t) there"
                .into(),
        ],
    })
}

fn sweep_point(base: &SimulationConfig, eps: f64, profiles: &TikhonovProfiles) -> Result<TikhonovPoint> {
    let params = base.params.with_epsilon(eps);
    let cfg = SimulationConfig {
        params,
        ..base.clone()
    };
    let g = &cfg.grid;
    let nx = g.nx();
    let amp = eps.powf(1.5);
    let mut u0: Vec<f64> = profiles.phi.iter().map(|v| amp * v).collect();
    let mut u1: Vec<f64> = profiles.psi.iter().map(|v| amp * v).collect();
    u0[0] = 0.0;
    u1[0] = 0.0;
    let layer0 = HeatField {
        p: profiles.chi.iter().map(|v| eps * v).collect(),
    };
    let qss0 = quasi_steady_state(u0[nx], params.c, params.d, g)?;
    let ic = CoupledState {
        wave: WaveField {
            u: u0.clone(),
            v: u1.clone(),
        },
        heat: HeatField {
            p: layer0.p.iter().zip(&qss0.p).map(|(a, b)| a + b).collect(),
        },
        t: 0.0,
    };

    let (n_steps, dt) = cfg.step_plan();
    let steps = comparison_steps(n_steps);
    let t_grid: Vec<f64> = steps.iter().map(|&k| k as f64 * dt).collect();

    let mut full = Vec::with_capacity(steps.len());
    simulate_coupled_observed(&cfg, &ic, |k, s| {
        if steps.binary_search(&k).is_ok() {
            full.push(s.clone());
        }
        Ok(())
    })?;
    let mut reduced = Vec::with_capacity(steps.len());
    simulate_reduced_observed(&cfg, &u0, &u1, |k, _, w| {
        if steps.binary_search(&k).is_ok() {
            reduced.push(w.clone());
        }
        Ok(())
    })?;
    let taus: Vec<f64> = t_grid.iter().map(|t| t / eps).collect();
    let (_, layer) = simulate_boundary_layer_sampled(&cfg, &layer0, &taus)?;

    let mut e_u = Vec::with_capacity(steps.len());
    let mut e_p = Vec::with_capacity(steps.len());
    let (mut sup_u, mut sup_p) = (0.0f64, 0.0f64);
    for (i, &t) in t_grid.iter().enumerate() {
        let (s, w, lay) = (&full[i], &reduced[i], &layer[i]);
        let du: Vec<f64> = s.wave.u.iter().zip(&w.u).map(|(a, b)| a - b).collect();
        let dv: Vec<f64> = s.wave.v.iter().zip(&w.v).map(|(a, b)| a - b).collect();
        let eu = h1_norm_sq(&du, g)?.sqrt() + l2_norm_sq(&dv, g)?.sqrt();
        let qss = quasi_steady_state(w.u[nx], params.c, params.d, g)?;
        let beta: Vec<f64> = (0..g.len())
            .map(|j| s.heat.p[j] - lay.p[j] - qss.p[j])
            .collect();
        let ep = l2_norm_sq(&beta, g)?.sqrt();
        let weight = (params.mu * t / 8.0).exp();
        sup_u = sup_u.max(weight * eu);
        sup_p = sup_p.max(weight * ep);
        e_u.push(eu);
        e_p.push(ep);
    }
    Ok(TikhonovPoint {
        epsilon: eps,
        e_u_max_weighted: sup_u,
        e_p_max_weighted: sup_p,
        t_grid,
        e_u,
        e_p,
    })
}
