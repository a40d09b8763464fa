//! Initial-condition presets.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::state::{CoupledState, HeatField, WaveField};

/// Shape of an initial profile.
#[derive(Debug, Clone, PartialEq)]
pub enum IcKind {
    Zero,
    /// `sin(k π x / 2)`; vanishes at 0, and has zero slope at 1 for odd `k`.
    Sine { wavenumber: f64 },
    /// `Σ cᵢ xⁱ`
    Poly { coefficients: Vec<f64> },
    /// `amplitude · exp(-((x - center)/width)²)`
    Gauss {
        center: f64,
        width: f64,
        amplitude: f64,
    },
}

impl IcKind {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            IcKind::Zero => 0.0,
            IcKind::Sine { wavenumber } => (wavenumber * PI * x / 2.0).sin(),
            IcKind::Poly { coefficients } => coefficients
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * x + c),
            IcKind::Gauss {
                center,
                width,
                amplitude,
            } => amplitude * (-((x - center) / width).powi(2)).exp(),
        }
    }

    pub fn sample(&self, g: &SpatialGrid) -> Vec<f64> {
        g.sample(|x| self.eval(x))
    }
}

impl FromStr for IcKind {
    type Err = Error;

    /// Parses `zero`, `sine <k>`, `poly <c0> <c1> ...` or `gauss <center> <width> <amplitude>`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let name = parts
            .next()
            .ok_or_else(|| Error::Config("empty initial-condition preset".into()))?;
        let args: Vec<f64> = parts
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::Config(format!("bad number '{t}' in preset '{s}'")))
            })
            .collect::<Result<_>>()?;
        let arity = |n: usize| -> Result<()> {
            if args.len() != n {
                return Err(Error::Config(format!(
                    "preset '{name}' takes {n} argument(s), got {}",
                    args.len()
                )));
            }
            Ok(())
        };
        match name {
            "zero" => {
                arity(0)?;
                Ok(IcKind::Zero)
            }
            "sine" => {
                arity(1)?;
                Ok(IcKind::Sine {
                    wavenumber: args[0],
                })
            }
            "poly" => {
                if args.is_empty() {
                    return Err(Error::Config("preset 'poly' needs coefficients".into()));
                }
                Ok(IcKind::Poly { coefficients: args })
            }
            "gauss" => {
                arity(3)?;
                if args[1] <= 0.0 {
                    return Err(Error::Config("gauss width must be positive".into()));
                }
                Ok(IcKind::Gauss {
                    center: args[0],
                    width: args[1],
                    amplitude: args[2],
                })
            }
            other => Err(Error::Config(format!("unknown preset '{other}'"))),
        }
    }
}

impl fmt::Display for IcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IcKind::Zero => write!(f, "zero"),
            IcKind::Sine { wavenumber } => write!(f, "sine {wavenumber}"),
            IcKind::Poly { coefficients } => {
                write!(f, "poly")?;
                for c in coefficients {
                    write!(f, " {c}")?;
                }
                Ok(())
            }
            IcKind::Gauss {
                center,
                width,
                amplitude,
            } => write!(f, "gauss {center} {width} {amplitude}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IcTarget {
    /// initial displacement
    U0,
    /// initial velocity
    U1,
    /// initial temperature
    P0,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialConditionSpec {
    pub kind: IcKind,
    pub target: IcTarget,
}

impl InitialConditionSpec {
    pub fn new(target: IcTarget, kind: IcKind) -> Self {
        Self { kind, target }
    }
}

/// A sampled initial state plus any compatibility adjustments that were made.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialState {
    pub state: CoupledState,
    pub warnings: Vec<String>,
}

/// Shift threshold above which a compatibility adjustment is reported.
pub const SHIFT_WARN: f64 = 1e-12;

/// Subtracts the x = 0 value so the field satisfies the Dirichlet condition.
pub(crate) fn enforce_vanishing_at_zero(f: &mut [f64], name: &str, warnings: &mut Vec<String>) {
    let shift = f[0];
    if shift != 0.0 {
        f.iter_mut().for_each(|v| *v -= shift);
        if shift.abs() > SHIFT_WARN {
            warnings.push(format!(
                "{name}: shifted by {shift:e} to satisfy the condition at x = 0"
            ));
        }
    }
    f[0] = 0.0;
}

/// Samples one preset per target. Both wave components are shifted to vanish at x = 0.
pub fn make_initial_state(
    specs: &[InitialConditionSpec],
    g: &SpatialGrid,
) -> Result<InitialState> {
    let find = |target: IcTarget| -> Result<&InitialConditionSpec> {
        let mut it = specs.iter().filter(|s| s.target == target);
        let first = it
            .next()
            .ok_or_else(|| Error::Config(format!("missing initial condition for {target:?}")))?;
        if it.next().is_some() {
            return Err(Error::Config(format!(
                "more than one initial condition for {target:?}"
            )));
        }
        Ok(first)
    };
    let mut warnings = Vec::new();
    let mut u = find(IcTarget::U0)?.kind.sample(g);
    let mut v = find(IcTarget::U1)?.kind.sample(g);
    let p = find(IcTarget::P0)?.kind.sample(g);
    enforce_vanishing_at_zero(&mut u, "u0", &mut warnings);
    enforce_vanishing_at_zero(&mut v, "u1", &mut warnings);
    let state = CoupledState::new(WaveField { u, v }, HeatField::new(p, g)?, 0.0, g)?;
    Ok(InitialState { state, warnings })
}
