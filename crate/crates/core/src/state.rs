//! Parameters and discrete field containers.

use crate::error::{Error, Result};
use crate::grid::SpatialGrid;

/// Coefficients of the coupled system.
///
/// * `a`: boundary damping of the wave at x = 1
/// * `b`: heat to wave coupling gain, `u_x(1) = -a u_t(1) + b p(0)`
/// * `c`: Robin coefficient of the heat equation at x = 0, `p_x(0) = c p(0)`
/// * `d`: wave to heat coupling gain, `p_x(1) = d u(1)`
/// * `epsilon`: time-scale ratio in `ε p_t = p_xx`
/// * `mu`: weight exponent of the Lyapunov functionals
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parameters {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub epsilon: f64,
    pub mu: f64,
}

impl Parameters {
    pub fn new(a: f64, b: f64, c: f64, d: f64, epsilon: f64, mu: f64) -> Result<Self> {
        let p = Self {
            a,
            b,
            c,
            d,
            epsilon,
            mu,
        };
        p.validate()?;
        Ok(p)
    }

    /// The reference admissible parameter set used throughout the examples and tests.
    pub fn default_admissible() -> Self {
        Self {
            a: 0.5,
            b: 0.1,
            c: 4.0,
            d: 0.2,
            epsilon: 0.01,
            mu: 0.1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.a, self.b, self.c, self.d, self.epsilon, self.mu];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parameter("parameters must be finite".into()));
        }
        if self.epsilon <= 0.0 {
            return Err(Error::Parameter(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.mu <= 0.0 {
            return Err(Error::Parameter(format!(
                "mu must be positive, got {}",
                self.mu
            )));
        }
        Ok(())
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }
}

/// Wave displacement `u` and velocity `v = u_t` sampled at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl WaveField {
    pub fn zeros(g: &SpatialGrid) -> Self {
        Self {
            u: vec![0.0; g.len()],
            v: vec![0.0; g.len()],
        }
    }

    pub fn new(u: Vec<f64>, v: Vec<f64>, g: &SpatialGrid) -> Result<Self> {
        g.check_len(&u, "u")?;
        g.check_len(&v, "v")?;
        Ok(Self { u, v })
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().chain(&self.v).all(|x| x.is_finite())
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            u: self.u.iter().map(|x| s * x).collect(),
            v: self.v.iter().map(|x| s * x).collect(),
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        Self {
            u: self.u.iter().zip(&other.u).map(|(a, b)| a - b).collect(),
            v: self.v.iter().zip(&other.v).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Temperature samples.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatField {
    pub p: Vec<f64>,
}

impl HeatField {
    pub fn zeros(g: &SpatialGrid) -> Self {
        Self {
            p: vec![0.0; g.len()],
        }
    }

    pub fn new(p: Vec<f64>, g: &SpatialGrid) -> Result<Self> {
        g.check_len(&p, "p")?;
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::Input("heat field has non-finite samples".into()));
        }
        Ok(Self { p })
    }

    pub fn is_finite(&self) -> bool {
        self.p.iter().all(|x| x.is_finite())
    }
}

/// The full state `(u, u_t, p)` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledState {
    pub wave: WaveField,
    pub heat: HeatField,
    pub t: f64,
}

impl CoupledState {
    pub fn zeros(g: &SpatialGrid) -> Self {
        Self {
            wave: WaveField::zeros(g),
            heat: HeatField::zeros(g),
            t: 0.0,
        }
    }

    pub fn new(wave: WaveField, heat: HeatField, t: f64, g: &SpatialGrid) -> Result<Self> {
        g.check_len(&wave.u, "u")?;
        g.check_len(&wave.v, "v")?;
        g.check_len(&heat.p, "p")?;
        Ok(Self { wave, heat, t })
    }

    pub fn is_finite(&self) -> bool {
        self.wave.is_finite() && self.heat.is_finite()
    }
}

/// One sample of the monitored functionals and boundary traces.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyRecord {
    pub t: f64,
    /// Total energy `½‖(u, u_t, p)‖²`.
    pub e: f64,
    pub v1: f64,
    pub w2: f64,
    pub v2: f64,
    /// `u(1, t)`
    pub u1: f64,
    /// `u_t(1, t)`
    pub ut1: f64,
    /// `p(0, t)`
    pub p0: f64,
    /// `p(1, t)`
    pub p1: f64,
}
