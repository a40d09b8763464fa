//! Simulation and verification toolkit for a wave equation coupled at the boundary
//! to a fast heat equation, `u_tt = u_xx`, `ε p_t = p_xx` on `(0, 1)`.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod functionals;
pub mod grid;
pub mod inequalities;
pub mod solvers;
pub mod state;
pub mod validator;

pub use error::{Error, Result};
pub use grid::SpatialGrid;
pub use state::{CoupledState, EnergyRecord, HeatField, Parameters, WaveField};
