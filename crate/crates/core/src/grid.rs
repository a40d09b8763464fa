//! Uniform grid on [0, 1], trapezoid quadrature and finite-difference derivatives.

use crate::error::{Error, Result};

/// Uniform grid with `nx` cells on the unit interval.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialGrid {
    nx: usize,
    h: f64,
    nodes: Vec<f64>,
    quad_weights: Vec<f64>,
}

impl SpatialGrid {
    pub const MIN_CELLS: usize = 8;

    pub fn new(nx: usize) -> Result<Self> {
        if nx < Self::MIN_CELLS {
            return Err(Error::Input(format!(
                "grid needs at least {} cells, got {nx}",
                Self::MIN_CELLS
            )));
        }
        let h = 1.0 / nx as f64;
        let nodes = (0..=nx).map(|j| j as f64 * h).collect();
        let mut quad_weights = vec![h; nx + 1];
        quad_weights[0] = 0.5 * h;
        quad_weights[nx] = 0.5 * h;
        Ok(Self {
            nx,
            h,
            nodes,
            quad_weights,
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Number of nodes, `nx + 1`.
    pub fn len(&self) -> usize {
        self.nx + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn quad_weights(&self) -> &[f64] {
        &self.quad_weights
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&x| f(x)).collect()
    }

    pub(crate) fn check_len(&self, f: &[f64], what: &str) -> Result<()> {
        if f.len() != self.len() {
            return Err(Error::Input(format!(
                "{what} has {} samples, grid has {} nodes",
                f.len(),
                self.len()
            )));
        }
        Ok(())
    }

    /// Trapezoid quadrature of the node samples `f`.
    pub fn integrate(&self, f: &[f64]) -> Result<f64> {
        self.check_len(f, "integrand")?;
        Ok(self.quad_weights.iter().zip(f).map(|(w, v)| w * v).sum())
    }
}

/// Trapezoid approximation of the integral of `f²` over [0, 1].
pub fn l2_norm_sq(f: &[f64], g: &SpatialGrid) -> Result<f64> {
    g.check_len(f, "field")?;
    Ok(g.quad_weights
        .iter()
        .zip(f)
        .map(|(w, v)| w * v * v)
        .sum())
}

/// Second-order finite-difference derivative.
///
/// Centered differences in the interior, three-point one-sided stencils at
/// both ends, so the result is exact for polynomials of degree two.
pub fn derivative(f: &[f64], g: &SpatialGrid) -> Result<Vec<f64>> {
    g.check_len(f, "field")?;
    let n = g.nx;
    let inv2h = 0.5 / g.h;
    let mut df = vec![0.0; n + 1];
    df[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h;
    for j in 1..n {
        df[j] = (f[j + 1] - f[j - 1]) * inv2h;
    }
    df[n] = (3.0 * f[n] - 4.0 * f[n - 1] + f[n - 2]) * inv2h;
    Ok(df)
}

/// `‖f‖²_{H¹} = ∫f² + ∫f_x²`.
pub fn h1_norm_sq(f: &[f64], g: &SpatialGrid) -> Result<f64> {
    let df = derivative(f, g)?;
    Ok(l2_norm_sq(f, g)? + l2_norm_sq(&df, g)?)
}
