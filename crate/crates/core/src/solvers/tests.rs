use super::*;

fn admissible_cfg(nx: usize, t_final: f64) -> SimulationConfig {
    let g = SpatialGrid::new(nx).unwrap();
    SimulationConfig::with_default_dt(Parameters::default_admissible(), g, t_final).unwrap()
}

fn sine_state(g: &SpatialGrid) -> CoupledState {
    CoupledState {
        wave: WaveField {
            u: g.sample(|x| (std::f64::consts::PI * x / 2.0).sin()),
            v: vec![0.0; g.len()],
        },
        heat: HeatField::zeros(g),
        t: 0.0,
    }
}

/// Root of `k tan k = c` in `(0, π/2)`.
fn robin_root(c: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, std::f64::consts::FRAC_PI_2 - 1e-15);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid.tan() < c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn config_validation() {
    let g = SpatialGrid::new(16).unwrap();
    let p = Parameters::default_admissible();
    assert!(SimulationConfig::new(p, g.clone(), 0.0, 1.0, 1).is_err());
    assert!(SimulationConfig::new(p, g.clone(), 0.1, -1.0, 1).is_err());
    assert!(SimulationConfig::new(p, g.clone(), 0.1, 1.0, 0).is_err());
    let cfg = SimulationConfig::new(p, g, 0.3, 1.0, 1).unwrap();
    let (n, dt) = cfg.step_plan();
    assert_eq!(n, 4);
    assert!((dt - 0.25).abs() < 1e-15);
}

#[test]
fn zero_state_is_fixed() {
    let cfg = admissible_cfg(20, 1.0);
    let run = simulate_coupled(&cfg, &CoupledState::zeros(&cfg.grid)).unwrap();
    assert!(run.records.iter().all(|r| r.e == 0.0 && r.v2 == 0.0));
    assert_eq!(run.final_state.wave, WaveField::zeros(&cfg.grid));
    let z = vec![0.0; cfg.grid.len()];
    let red = simulate_reduced(&cfg, &z, &z).unwrap();
    assert!(red.records.iter().all(|r| r.e == 0.0));
    let layer = simulate_boundary_layer(&cfg, &HeatField::zeros(&cfg.grid)).unwrap();
    assert_eq!(layer.stop_time, Some(0.0));
}

#[test]
fn records_follow_stride() {
    let g = SpatialGrid::new(16).unwrap();
    let cfg = SimulationConfig::new(Parameters::default_admissible(), g, 0.1, 1.05, 3).unwrap();
    let (n, _) = cfg.step_plan();
    assert_eq!(n, 11);
    let run = simulate_coupled(&cfg, &sine_state(&cfg.grid)).unwrap();
    // steps 0, 3, 6, 9 and the last one
    assert_eq!(run.records.len(), 5);
    assert!((run.records.last().unwrap().t - 1.05).abs() < 1e-12);
}

#[test]
fn coupled_energy_non_increasing() {
    let cfg = admissible_cfg(50, 5.0);
    let run = simulate_coupled(&cfg, &sine_state(&cfg.grid)).unwrap();
    for w in run.records.windows(2) {
        assert!(w[1].e <= w[0].e * (1.0 + 1e-10), "{} -> {}", w[0].e, w[1].e);
    }
    assert!(run.records.last().unwrap().e < run.records[0].e);
}

#[test]
fn pure_damped_wave_energy_non_increasing() {
    let g = SpatialGrid::new(40).unwrap();
    let p = Parameters {
        b: 0.0,
        ..Parameters::default_admissible()
    };
    let cfg = SimulationConfig::with_default_dt(p, g, 4.0).unwrap();
    let u0 = cfg.grid.sample(|x| (std::f64::consts::PI * x / 2.0).sin());
    let run = simulate_reduced(&cfg, &u0, &vec![0.0; 41]).unwrap();
    for w in run.records.windows(2) {
        assert!(w[1].e <= w[0].e * (1.0 + 1e-10));
    }
    assert_eq!(run.trace.len(), run.records.len());
}

#[test]
fn layer_eigenmode_decays_at_oracle_rate() {
    let c = 4.0;
    let k = robin_root(c);
    assert!((k - 1.2646).abs() < 1e-3);
    let g = SpatialGrid::new(100).unwrap();
    let p = Parameters {
        epsilon: 1.0,
        ..Parameters::default_admissible()
    };
    let cfg = SimulationConfig::new(p, g, 0.005, 2.0, 1).unwrap();
    let p0 = HeatField {
        p: cfg.grid.sample(|x| (k * x).cos() + (c / k) * (k * x).sin()),
    };
    let run = simulate_boundary_layer(&cfg, &p0).unwrap();
    let first = run.records[0];
    let last = run.records.last().unwrap();
    let rate = -(last.w2 / first.w2).ln() / (last.t - first.t);
    assert!((rate / (2.0 * k * k) - 1.0).abs() < 0.02, "rate {rate}");
    assert!(run.stop_time.is_none());
}

#[test]
fn layer_sampling_interpolates_and_zeroes_after_stop() {
    let g = SpatialGrid::new(20).unwrap();
    let p = Parameters {
        epsilon: 1.0,
        ..Parameters::default_admissible()
    };
    let cfg = SimulationConfig::new(p, g, 0.05, 60.0, 1).unwrap();
    let p0 = HeatField {
        p: vec![1.0; 21],
    };
    let (run, s) = simulate_boundary_layer_sampled(&cfg, &p0, &[0.0, 0.025, 59.0]).unwrap();
    let stop = run.stop_time.expect("layer should die out");
    assert!(stop < 59.0);
    assert_eq!(s[0], p0);
    assert!(s[1].p.iter().all(|v| *v < 1.0 && *v > 0.0));
    assert!(s[2].p.iter().all(|v| *v == 0.0));
}

#[test]
fn resolvent_round_trip() {
    let p = Parameters::default_admissible();
    let g = SpatialGrid::new(40).unwrap();
    let gen = assemble_discrete_generator(&p, &g);
    let y = CoupledState {
        wave: WaveField {
            u: g.sample(|x| x.sin() + 0.1 * x * x),
            v: g.sample(|x| x * (1.0 - x)),
        },
        heat: HeatField {
            p: g.sample(|x| (2.0 * x).cos()),
        },
        t: 0.0,
    };
    let ay = gen.apply(&y);
    let back = solve_resolvent(&p, &ay, &g).unwrap();
    let again = gen.apply(&back);
    let num: f64 = Layout::pack_coupled(40, &again)
        .iter()
        .zip(Layout::pack_coupled(40, &ay).iter())
        .map(|(a, b)| (a - b).powi(2))
        .sum();
    let den: f64 = Layout::pack_coupled(40, &ay).iter().map(|a| a * a).sum();
    assert!((num / den).sqrt() < 1e-10);
}
