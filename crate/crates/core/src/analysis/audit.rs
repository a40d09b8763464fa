use std::f64::consts::PI;
use std::fmt;

use super::fit::fit_decay_rate;
use super::observability::{boundary_layer_trace_check, observability_integral};
use super::robin_root;
use crate::error::{Error, Result};
use crate::functionals::{h_inner_product_wave, quasi_steady_state, v1, wave_seminorm_sq};
use crate::grid::{derivative, h1_norm_sq, l2_norm_sq};
use crate::solvers::{
    simulate_boundary_layer_sampled, simulate_coupled_observed, simulate_reduced_observed,
    SimulationConfig,
};
use crate::state::{CoupledState, EnergyRecord, HeatField, Parameters, WaveField};
use crate::validator::{check_theorem_1_1, check_theorem_1_3, DecayVariant};

/// Relative slack on claimed decay-rate lower bounds.
pub const RATE_TOLERANCE: f64 = 0.05;
/// Relative agreement required between a measured rate and the eigenvalue oracle.
pub const ORACLE_TOLERANCE: f64 = 0.02;
/// Slack on monotonicity, relative to the initial energy.
const MONOTONE_SLACK: f64 = 1e-10;

/// Every claim id the audit may emit, in report order.
pub const CLAIM_IDS: &[&str] = &[
    "energy_monotone",
    "energy_rate",
    "full_state_rate_l2",
    "full_state_rate_h1",
    "reduced_rate",
    "layer_rate_printed",
    "layer_rate_oracle",
    "layer_h1_rate",
    "energy_derivative",
    "observability",
    "layer_trace",
    "w_tilde_beta",
    "alpha_sandwich",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Confirmed,
    Violated,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Confirmed => "CONFIRMED",
            Verdict::Violated => "VIOLATED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditEntry {
    pub claim_id: &'static str,
    pub measured: f64,
    pub bound: f64,
    pub verdict: Verdict,
    pub notes: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AuditReport {
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn entry(&self, claim_id: &str) -> Option<&AuditEntry> {
        self.entries.iter().find(|e| e.claim_id == claim_id)
    }

    pub fn any_violated(&self) -> bool {
        self.entries.iter().any(|e| e.verdict == Verdict::Violated)
    }
}

fn entry(claim_id: &'static str, measured: f64, bound: f64, verdict: Verdict, notes: impl Into<String>) -> AuditEntry {
    AuditEntry {
        claim_id,
        measured,
        bound,
        verdict,
        notes: notes.into(),
    }
}

/// Compares a fitted rate (`factor` times the fit of `series`) against a claimed lower bound.
fn rate_entry(
    claim_id: &'static str,
    series: &[(f64, f64)],
    burn_in: f64,
    factor: f64,
    bound: f64,
    hypotheses: bool,
    what: &str,
) -> AuditEntry {
    let fit = match fit_decay_rate(series, burn_in) {
        Ok(f) => f,
        Err(e) => return entry(claim_id, f64::NAN, bound, Verdict::Inconclusive, format!("{what}: {e}")),
    };
    let rate = factor * fit.rate;
    let note = format!("{what}, r^2 = {:.6}", fit.r_squared);
    if !hypotheses {
        return entry(claim_id, rate, bound, Verdict::Inconclusive, format!("{note}; hypotheses not met"));
    }
    let verdict = if rate >= bound * (1.0 - RATE_TOLERANCE) {
        Verdict::Confirmed
    } else {
        Verdict::Violated
    };
    entry(claim_id, rate, bound, verdict, note)
}

/// Upper bound on `dE/dt` from the dissipation estimate, with `‖(u, u_t)‖_H` read as squared.
fn energy_derivative_bound(s: &CoupledState, p: &Parameters, g: &crate::SpatialGrid) -> Result<f64> {
    let wave = h_inner_product_wave(&s.wave, &s.wave, p.mu, g)?;
    let pn = l2_norm_sq(&s.heat.p, g)?;
    let px = l2_norm_sq(&derivative(&s.heat.p, g)?, g)?;
    let p0 = s.heat.p[0] * s.heat.p[0];
    let k = p.d * p.d * p.mu.exp() / (2.0 * p.mu);
    let pi2_8 = PI * PI / 8.0;
    Ok(-0.5 * p.mu * wave - pi2_8 * pn + (k - 0.5) * px + (pi2_8 - 0.5 * p.c) * p0
        + (k + (2.0 * p.mu.sinh() + 4.0 * p.mu.cosh()) * p.b * p.b - 0.5 * p.c) * p0)
}

/// Runs the full, reduced and boundary-layer systems from `ic` and checks each
/// quantitative claim against the trajectories.
///
/// The layer starts from `p̄₀ = p₀ - (d/c + d x) u₀(1)`; the reduced system from `(u₀, u₁)`.
/// Violations are reported, never raised.
pub fn claim_audit(cfg: &SimulationConfig, ic: &CoupledState, burn_in: f64) -> Result<AuditReport> {
    cfg.validate()?;
    let p = cfg.params;
    if p.c <= 0.0 {
        return Err(Error::Parameter(format!("audit needs c > 0, got {}", p.c)));
    }
    let g = &cfg.grid;
    let nx = g.nx();
    let (n_steps, _) = cfg.step_plan();

    let mut full: Vec<CoupledState> = Vec::new();
    let run = simulate_coupled_observed(cfg, ic, |k, s| {
        if cfg.records_at(k, n_steps) {
            full.push(s.clone());
        }
        Ok(())
    })?;
    let mut reduced: Vec<WaveField> = Vec::new();
    let red = simulate_reduced_observed(cfg, &ic.wave.u, &ic.wave.v, |k, _, w| {
        if cfg.records_at(k, n_steps) {
            reduced.push(w.clone());
        }
        Ok(())
    })?;
    let qss0 = quasi_steady_state(ic.wave.u[nx], p.c, p.d, g)?;
    let layer0 = HeatField {
        p: ic.heat.p.iter().zip(&qss0.p).map(|(a, b)| a - b).collect(),
    };
    let taus: Vec<f64> = run.records.iter().map(|r| r.t / p.epsilon).collect();
    let (layer, layer_at) = simulate_boundary_layer_sampled(cfg, &layer0, &taus)?;

    let t1 = check_theorem_1_1(&p);
    let mut entries = Vec::new();
    let recs = &run.records;
    let e0 = recs[0].e;

    // energy monotonicity
    let worst = recs
        .windows(2)
        .map(|w| w[1].e - w[0].e)
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0);
    let rel = if e0 > 0.0 { worst / e0 } else { worst };
    entries.push(entry(
        "energy_monotone",
        rel,
        MONOTONE_SLACK,
        if rel <= MONOTONE_SLACK { Verdict::Confirmed } else { Verdict::Violated },
        "largest increase of E between recorded samples, relative to E(0)",
    ));

    let series = |f: &dyn Fn(&EnergyRecord) -> f64| -> Vec<(f64, f64)> {
        recs.iter().map(|r| (r.t, f(r))).collect()
    };
    entries.push(rate_entry(
        "energy_rate",
        &series(&|r| r.e),
        burn_in,
        1.0,
        (0.5 * p.mu).min(PI * PI / 8.0),
        t1.all_satisfied,
        "fitted decay rate of E",
    ));

    // full-state norms: the claim bounds the norm, so half the fitted rate of its square
    let mut l2_series = Vec::with_capacity(full.len());
    let mut h1_series = Vec::with_capacity(full.len());
    for s in &full {
        let wave = h1_norm_sq(&s.wave.u, g)? + l2_norm_sq(&s.wave.v, g)?;
        l2_series.push((s.t, wave + l2_norm_sq(&s.heat.p, g)?));
        h1_series.push((s.t, wave + h1_norm_sq(&s.heat.p, g)?));
    }
    entries.push(rate_entry(
        "full_state_rate_l2",
        &l2_series,
        burn_in,
        0.5,
        0.25 * p.mu,
        check_theorem_1_3(&p, DecayVariant::I).all_satisfied,
        "decay rate of the H1 x L2 x L2 norm",
    ));
    entries.push(rate_entry(
        "full_state_rate_h1",
        &h1_series,
        burn_in,
        0.5,
        0.25 * p.mu,
        check_theorem_1_3(&p, DecayVariant::II).all_satisfied,
        "decay rate of the H1 x L2 x H1 norm",
    ));

    let reduced_hyp = (p.b * p.d / p.c).abs()
        <= (p.mu * (-p.mu).exp() / (p.mu.sinh() + 2.0 * p.mu.cosh())).sqrt();
    let red_series: Vec<(f64, f64)> = red.records.iter().map(|r| (r.t, r.v1)).collect();
    entries.push(rate_entry(
        "reduced_rate",
        &red_series,
        burn_in,
        1.0,
        0.5 * p.mu,
        reduced_hyp,
        "fitted decay rate of V1 on the reduced system",
    ));

    // boundary layer
    let layer_hyp = p.c >= PI * PI / 4.0;
    let w2_series: Vec<(f64, f64)> = layer.records.iter().map(|r| (r.t, r.w2)).collect();
    let v2_series: Vec<(f64, f64)> = layer.records.iter().map(|r| (r.t, r.v2)).collect();
    let k = robin_root(p.c)?;
    let oracle = 2.0 * k * k;
    let mut printed = rate_entry(
        "layer_rate_printed",
        &w2_series,
        burn_in,
        1.0,
        PI * PI / 2.0,
        layer_hyp,
        "fitted decay rate of the squared layer L2 norm",
    );
    printed.notes.push_str(&format!("; eigenvalue oracle 2k^2 = {oracle:.6}"));
    entries.push(printed);
    entries.push(match fit_decay_rate(&w2_series, burn_in) {
        Ok(fit) => {
            let dev = (fit.rate / oracle - 1.0).abs();
            entry(
                "layer_rate_oracle",
                fit.rate,
                oracle,
                if dev <= ORACLE_TOLERANCE { Verdict::Confirmed } else { Verdict::Violated },
                format!("k tan k = c with k = {k:.10}; relative deviation {dev:.3e}"),
            )
        }
        Err(e) => entry("layer_rate_oracle", f64::NAN, oracle, Verdict::Inconclusive, e.to_string()),
    });
    entries.push(rate_entry(
        "layer_h1_rate",
        &v2_series,
        burn_in,
        1.0,
        PI * PI / 4.0,
        layer_hyp,
        "fitted decay rate of V2 on the layer",
    ));

    // dissipation estimate, central differences on interior samples
    let mut worst_excess = f64::NEG_INFINITY;
    let mut violations = 0usize;
    let mut first_violation = None;
    for i in 1..full.len().saturating_sub(1) {
        let de = (full[i + 1].t - full[i - 1].t).recip() * (recs[i + 1].e - recs[i - 1].e);
        let bound = energy_derivative_bound(&full[i], &p, g)?;
        let excess = de - bound;
        let slack = 1e-3 * bound.abs() + MONOTONE_SLACK * e0;
        if excess > slack {
            violations += 1;
            first_violation.get_or_insert(full[i].t);
        }
        worst_excess = worst_excess.max(excess / bound.abs().max(f64::MIN_POSITIVE));
    }
    entries.push(if full.len() < 3 {
        entry("energy_derivative", f64::NAN, 0.0, Verdict::Inconclusive, "fewer than 3 samples")
    } else if worst_excess == f64::NEG_INFINITY {
        entry("energy_derivative", 0.0, 0.0, Verdict::Confirmed, "")
    } else {
        let measured = if e0 == 0.0 { 0.0 } else { worst_excess };
        entry(
            "energy_derivative",
            measured,
            0.0,
            if violations == 0 { Verdict::Confirmed } else { Verdict::Violated },
            match first_violation {
                Some(t) => format!(
                    "largest (dE/dt - bound)/|bound|; {violations} of {} samples exceed it, first at t = {t:.6}",
                    full.len() - 2
                ),
                None => "largest (dE/dt - bound)/|bound| over interior samples".into(),
            },
        )
    });

    // observability of the reduced boundary velocity
    entries.push(match observability_integral(&red, &p) {
        Ok(rep) => entry(
            "observability",
            rep.kappa,
            f64::INFINITY,
            if rep.flat { Verdict::Confirmed } else { Verdict::Violated },
            format!(
                "empirical constant q sup I(t) e^(mu t/2) / |(u0, u1)|^2; {}",
                if rep.flat { "flat over the last 20%" } else { "still growing over the last 20%" }
            ),
        ),
        Err(e) => entry("observability", f64::NAN, f64::INFINITY, Verdict::Inconclusive, e.to_string()),
    });

    // layer trace bound
    let verdicts = boundary_layer_trace_check(&layer, p.c, h1_norm_sq(&layer0.p, g)?);
    let ratio = verdicts
        .iter()
        .filter(|v| v.trace_sq > 0.0)
        .map(|v| v.trace_sq / v.bound)
        .fold(0.0, f64::max);
    let failed: Vec<f64> = verdicts.iter().filter(|v| !v.satisfied).map(|v| v.tau).collect();
    entries.push(entry(
        "layer_trace",
        ratio,
        1.0,
        if failed.is_empty() { Verdict::Confirmed } else { Verdict::Violated },
        match failed.first() {
            Some(tau) => format!(
                "largest |p(0)|^2 / bound; {} of {} samples fail, first at tau = {tau:.6}",
                failed.len(),
                verdicts.len()
            ),
            None => "largest |p(0)|^2 / bound".into(),
        },
    ));

    // error functional W~ = V1(alpha) + eps W2(beta)
    let mut beta_ratio = f64::INFINITY;
    let (mut sandwich_lo, mut sandwich_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (i, s) in full.iter().enumerate() {
        let w = &reduced[i];
        let alpha = s.wave.minus(w);
        let qss = quasi_steady_state(w.u[nx], p.c, p.d, g)?;
        let beta: Vec<f64> = (0..g.len())
            .map(|j| s.heat.p[j] - layer_at[i].p[j] - qss.p[j])
            .collect();
        let va = v1(&alpha, p.mu, g)?;
        let b2 = l2_norm_sq(&beta, g)?;
        if b2 > 0.0 {
            beta_ratio = beta_ratio.min((va + 0.5 * p.epsilon * b2) / (p.epsilon * b2));
        }
        let a2 = wave_seminorm_sq(&alpha, g)?;
        if a2 > 0.0 {
            sandwich_lo = sandwich_lo.min(va / a2);
            sandwich_hi = sandwich_hi.max(va / a2);
        }
    }
    entries.push(if beta_ratio.is_finite() {
        entry(
            "w_tilde_beta",
            beta_ratio,
            0.5,
            if beta_ratio >= 0.5 * (1.0 - 1e-12) { Verdict::Confirmed } else { Verdict::Violated },
            "smallest W~ / (eps |beta|^2) over the error trajectory",
        )
    } else {
        entry("w_tilde_beta", 0.0, 0.5, Verdict::Confirmed, "beta vanishes identically")
    });
    let (lo, hi) = ((-p.mu).exp(), p.mu.exp());
    entries.push(if sandwich_lo.is_finite() {
        let ok = sandwich_lo >= lo * (1.0 - 1e-12) && sandwich_hi <= hi * (1.0 + 1e-12);
        entry(
            "alpha_sandwich",
            sandwich_lo,
            lo,
            if ok { Verdict::Confirmed } else { Verdict::Violated },
            format!(
                "V1(alpha) / (|alpha_x|^2 + |alpha_t|^2) within [{sandwich_lo:.6}, {sandwich_hi:.6}], \
                 allowed [{lo:.6}, {hi:.6}]"
            ),
        )
    } else {
        entry("alpha_sandwich", 0.0, lo, Verdict::Confirmed, "alpha vanishes identically")
    });

    debug_assert!(entries.iter().all(|e| CLAIM_IDS.contains(&e.claim_id)));
    Ok(AuditReport { entries })
}
