//! Time integration of the full, reduced and boundary-layer systems, the
//! stationary resolvent problem, and generator assembly.
//!
//! All three systems use the same monolithic Crank-Nicolson scheme on the
//! method-of-lines discretization from [`generator`], with the system matrix
//! factorized once per run.

pub mod generator;
pub mod ic;
mod resolvent;
pub mod stepper;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::functionals::{h_inner_product_wave, quasi_steady_state, total_energy, v1, v2, w2,
    wave_seminorm_sq,
};
use crate::grid::SpatialGrid;
use crate::state::{CoupledState, EnergyRecord, HeatField, Parameters, WaveField};

pub use generator::{
    assemble_discrete_generator, assemble_layer_generator, assemble_reduced_generator,
    DiscreteGenerator, Layout, SparseOperator,
};
pub use ic::{make_initial_state, IcKind, IcTarget, InitialConditionSpec, InitialState};
pub use resolvent::solve_resolvent;
use stepper::CrankNicolson;

/// The boundary-layer run stops once `V₂ < LAYER_STOP_RATIO · V₂(0)`.
pub const LAYER_STOP_RATIO: f64 = 1e-16;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub params: Parameters,
    pub grid: SpatialGrid,
    pub dt: f64,
    pub t_final: f64,
    pub record_stride: usize,
}

impl SimulationConfig {
    pub fn new(
        params: Parameters,
        grid: SpatialGrid,
        dt: f64,
        t_final: f64,
        record_stride: usize,
    ) -> Result<Self> {
        let cfg = Self {
            params,
            grid,
            dt,
            t_final,
            record_stride,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `dt = h/2`, recording every step.
    pub fn with_default_dt(params: Parameters, grid: SpatialGrid, t_final: f64) -> Result<Self> {
        let dt = 0.5 * grid.h();
        Self::new(params, grid, dt, t_final, 1)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::Config(format!(
                "t_final must be positive, got {}",
                self.t_final
            )));
        }
        if self.record_stride == 0 {
            return Err(Error::Config("record_stride must be at least 1".into()));
        }
        Ok(())
    }

    /// Number of steps and the step length actually used: the horizon is split into
    /// `ceil(t_final / dt)` equal steps so the run ends exactly at `t_final`.
    pub fn step_plan(&self) -> (usize, f64) {
        step_plan(self.t_final, self.dt)
    }

    pub(crate) fn records_at(&self, step: usize, last: usize) -> bool {
        step.is_multiple_of(self.record_stride) || step == last
    }
}

fn step_plan(horizon: f64, dt: f64) -> (usize, f64) {
    let n = ((horizon / dt) - 1e-9).ceil().max(1.0) as usize;
    (n, horizon / n as f64)
}

fn check_finite(y: &DVector<f64>, step: usize) -> Result<()> {
    if y.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::numerical_at("non-finite field values", step))
    }
}

/// Functionals and traces of a full-system state.
pub fn coupled_record(s: &CoupledState, params: &Parameters, g: &SpatialGrid) -> Result<EnergyRecord> {
    let nx = g.nx();
    Ok(EnergyRecord {
        t: s.t,
        e: total_energy(s, params, g)?,
        v1: v1(&s.wave, params.mu, g)?,
        w2: w2(&s.heat, g)?,
        v2: if params.c > 0.0 {
            v2(&s.heat, params.c, g)?
        } else {
            f64::NAN
        },
        u1: s.wave.u[nx],
        ut1: s.wave.v[nx],
        p0: s.heat.p[0],
        p1: s.heat.p[nx],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoupledRun {
    pub records: Vec<EnergyRecord>,
    pub final_state: CoupledState,
}

pub fn simulate_coupled(cfg: &SimulationConfig, ic: &CoupledState) -> Result<CoupledRun> {
    simulate_coupled_observed(cfg, ic, |_, _| Ok(()))
}

/// Like [`simulate_coupled`], calling `observer(step, state)` after every step
/// (and once for the initial state, step 0).
pub fn simulate_coupled_observed(
    cfg: &SimulationConfig,
    ic: &CoupledState,
    mut observer: impl FnMut(usize, &CoupledState) -> Result<()>,
) -> Result<CoupledRun> {
    cfg.validate()?;
    let g = &cfg.grid;
    let nx = g.nx();
    let (n_steps, dt) = cfg.step_plan();
    let gen = assemble_discrete_generator(&cfg.params, g);
    let mut stepper = CrankNicolson::new(gen.sparse(), dt)?;

    let mut y = Layout::pack_coupled(nx, ic);
    check_finite(&y, 0)?;
    let mut state = Layout::unpack_coupled(nx, &y, 0.0);
    let mut records = vec![coupled_record(&state, &cfg.params, g)?];
    observer(0, &state)?;
    for step in 1..=n_steps {
        stepper.step(&mut y)?;
        check_finite(&y, step)?;
        state = Layout::unpack_coupled(nx, &y, step as f64 * dt);
        if cfg.records_at(step, n_steps) {
            records.push(coupled_record(&state, &cfg.params, g)?);
        }
        observer(step, &state)?;
    }
    Ok(CoupledRun {
        records,
        final_state: state,
    })
}

fn wave_record(t: f64, w: &WaveField, params: &Parameters, g: &SpatialGrid) -> Result<EnergyRecord> {
    let nx = g.nx();
    Ok(EnergyRecord {
        t,
        e: 0.5 * h_inner_product_wave(w, w, params.mu, g)?,
        v1: v1(w, params.mu, g)?,
        u1: w.u[nx],
        ut1: w.v[nx],
        ..Default::default()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedRun {
    /// `E` holds the wave part `½‖(ū, ū_t)‖²_H`; heat columns are zero.
    pub records: Vec<EnergyRecord>,
    /// `(t, ū_t(1, t))` at every recorded sample.
    pub trace: Vec<(f64, f64)>,
    pub final_wave: WaveField,
    /// `‖ū₀_x‖² + ‖ū₁‖²` of the initial data.
    pub initial_norm_sq: f64,
}

pub fn simulate_reduced(cfg: &SimulationConfig, u0: &[f64], u1: &[f64]) -> Result<ReducedRun> {
    simulate_reduced_observed(cfg, u0, u1, |_, _, _| Ok(()))
}

/// Reduced wave system. The x = 0 samples of `u0` and `u1` are discarded (Dirichlet node).
pub fn simulate_reduced_observed(
    cfg: &SimulationConfig,
    u0: &[f64],
    u1: &[f64],
    mut observer: impl FnMut(usize, f64, &WaveField) -> Result<()>,
) -> Result<ReducedRun> {
    cfg.validate()?;
    if cfg.params.c == 0.0 {
        return Err(Error::Parameter("reduced system needs c != 0".into()));
    }
    let g = &cfg.grid;
    g.check_len(u0, "u0")?;
    g.check_len(u1, "u1")?;
    let nx = g.nx();
    let (n_steps, dt) = cfg.step_plan();
    let gen = assemble_reduced_generator(&cfg.params, g);
    let mut stepper = CrankNicolson::new(gen.sparse(), dt)?;

    let mut y = DVector::zeros(2 * nx);
    y.as_mut_slice()[..nx].copy_from_slice(&u0[1..]);
    y.as_mut_slice()[nx..].copy_from_slice(&u1[1..]);
    check_finite(&y, 0)?;
    let mut wave = Layout::unpack_wave(nx, y.as_slice());
    let initial_norm_sq = wave_seminorm_sq(&wave, g)?;
    let mut records = vec![wave_record(0.0, &wave, &cfg.params, g)?];
    observer(0, 0.0, &wave)?;
    for step in 1..=n_steps {
        stepper.step(&mut y)?;
        check_finite(&y, step)?;
        wave = Layout::unpack_wave(nx, y.as_slice());
        let t = step as f64 * dt;
        if cfg.records_at(step, n_steps) {
            records.push(wave_record(t, &wave, &cfg.params, g)?);
        }
        observer(step, t, &wave)?;
    }
    let trace = records.iter().map(|r| (r.t, r.ut1)).collect();
    Ok(ReducedRun {
        records,
        trace,
        final_wave: wave,
        initial_norm_sq,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerRun {
    /// Samples in the stretched time τ: `t` holds τ, only `W2`, `V2`, `p0`, `p1` are set.
    pub records: Vec<EnergyRecord>,
    /// `(τ, p̄(0, τ))` at every recorded sample.
    pub trace: Vec<(f64, f64)>,
    /// τ at which `V₂` dropped below the stop threshold, if it did before the horizon.
    pub stop_time: Option<f64>,
    pub final_field: HeatField,
    /// Step length in τ.
    pub dtau: f64,
}

fn layer_record(tau: f64, p: &HeatField, c: f64, g: &SpatialGrid) -> Result<EnergyRecord> {
    Ok(EnergyRecord {
        t: tau,
        w2: w2(p, g)?,
        v2: v2(p, c, g)?,
        p0: p.p[0],
        p1: p.p[g.nx()],
        ..Default::default()
    })
}

pub fn simulate_boundary_layer(cfg: &SimulationConfig, p0: &HeatField) -> Result<LayerRun> {
    Ok(simulate_boundary_layer_sampled(cfg, p0, &[])?.0)
}

/// Boundary-layer system in τ = t/ε with step `cfg.dt` and horizon `cfg.t_final / ε`.
///
/// Also returns the field at each requested τ (linear interpolation between steps;
/// zero past the stop time, the last field past the horizon).
pub fn simulate_boundary_layer_sampled(
    cfg: &SimulationConfig,
    p0: &HeatField,
    taus: &[f64],
) -> Result<(LayerRun, Vec<HeatField>)> {
    cfg.validate()?;
    let c = cfg.params.c;
    if c <= 0.0 {
        return Err(Error::Parameter(format!(
            "boundary-layer system needs c > 0, got {c}"
        )));
    }
    let g = &cfg.grid;
    g.check_len(&p0.p, "p0")?;
    let nx = g.nx();
    let horizon = cfg.t_final / cfg.params.epsilon;
    let (n_steps, dtau) = step_plan(horizon, cfg.dt);

    let mut order: Vec<usize> = (0..taus.len()).collect();
    order.sort_by(|&i, &j| taus[i].total_cmp(&taus[j]));
    let mut samples: Vec<Option<HeatField>> = vec![None; taus.len()];
    let mut next = 0;

    let mut y = DVector::from_column_slice(&p0.p);
    check_finite(&y, 0)?;
    let mut field = p0.clone();
    let v2_initial = v2(&field, c, g)?;
    let mut records = vec![layer_record(0.0, &field, c, g)?];

    while next < order.len() && taus[order[next]] <= 0.0 {
        samples[order[next]] = Some(field.clone());
        next += 1;
    }

    let mut stop_time = (v2_initial == 0.0).then_some(0.0);
    if stop_time.is_none() {
        let gen = assemble_layer_generator(c, g);
        let mut stepper = CrankNicolson::new(gen.sparse(), dtau)?;
        for step in 1..=n_steps {
            let prev = field.clone();
            stepper.step(&mut y)?;
            check_finite(&y, step)?;
            field = HeatField {
                p: y.as_slice().to_vec(),
            };
            let tau = step as f64 * dtau;
            while next < order.len() && taus[order[next]] <= tau {
                let s = (taus[order[next]] - (tau - dtau)) / dtau;
                let p = prev
                    .p
                    .iter()
                    .zip(&field.p)
                    .map(|(a, b)| (1.0 - s) * a + s * b)
                    .collect();
                samples[order[next]] = Some(HeatField { p });
                next += 1;
            }
            let stopped = v2(&field, c, g)? < LAYER_STOP_RATIO * v2_initial;
            if cfg.records_at(step, n_steps) || stopped {
                records.push(layer_record(tau, &field, c, g)?);
            }
            if stopped {
                stop_time = Some(tau);
                break;
            }
        }
    }
    let fill = if stop_time.is_some() {
        HeatField::zeros(g)
    } else {
        field.clone()
    };
    let sampled = samples
        .into_iter()
        .map(|s| s.unwrap_or_else(|| fill.clone()))
        .collect();
    let trace = records.iter().map(|r| (r.t, r.p0)).collect();
    debug_assert_eq!(field.p.len(), nx + 1);
    Ok((
        LayerRun {
            records,
            trace,
            stop_time,
            final_field: field,
            dtau,
        },
        sampled,
    ))
}

/// Heat field `p̄(x, t/ε) + (d/c + d x) ū(1, t)` approximating the full-system temperature.
pub fn composite_heat(
    layer: &HeatField,
    reduced_u1: f64,
    params: &Parameters,
    g: &SpatialGrid,
) -> Result<HeatField> {
    let qss = quasi_steady_state(reduced_u1, params.c, params.d, g)?;
    Ok(HeatField {
        p: layer.p.iter().zip(&qss.p).map(|(a, b)| a + b).collect(),
    })
}

#[cfg(test)]
mod tests;
