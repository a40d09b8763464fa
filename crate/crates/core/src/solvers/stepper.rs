//! Trapezoidal (Crank-Nicolson) time stepping for `y' = A y`.

use nalgebra::{DMatrix, DVector, Dyn, LU};

use super::generator::SparseOperator;
use crate::error::{Error, Result};

/// Number of leading steps replaced by two implicit-Euler half steps each.
///
/// Crank-Nicolson does not damp the stiff heat modes (amplification factor near -1),
/// so incompatible initial data would leave an undamped grid-scale oscillation.
/// Implicit-Euler half steps reuse the same factorization of `I - (dt/2) A`.
pub const DAMPED_STARTUP_STEPS: usize = 2;

/// Pivot ratio below which the system matrix is treated as singular.
const SINGULAR_PIVOT_RATIO: f64 = 1e-14;

pub struct CrankNicolson {
    op: SparseOperator,
    lu: LU<f64, Dyn, Dyn>,
    dt: f64,
    steps_taken: usize,
}

impl CrankNicolson {
    pub fn new(op: &SparseOperator, dt: f64) -> Result<Self> {
        let n = op.dim();
        let mut m: DMatrix<f64> = op.to_dense() * (-0.5 * dt);
        for i in 0..n {
            m[(i, i)] += 1.0;
        }
        let lu = m.lu();
        check_pivots(&lu)?;
        Ok(Self {
            op: op.clone(),
            lu,
            dt,
            steps_taken: 0,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advances `y` by one step of length `dt`.
    pub fn step(&mut self, y: &mut DVector<f64>) -> Result<()> {
        if self.steps_taken < DAMPED_STARTUP_STEPS {
            for _ in 0..2 {
                self.solve_in_place(y)?;
            }
        } else {
            let ay = self.op.mul_vec(y);
            y.axpy(0.5 * self.dt, &ay, 1.0);
            self.solve_in_place(y)?;
        }
        self.steps_taken += 1;
        Ok(())
    }

    fn solve_in_place(&self, y: &mut DVector<f64>) -> Result<()> {
        if !self.lu.solve_mut(y) {
            return Err(Error::numerical("singular time-step matrix"));
        }
        Ok(())
    }
}

pub(crate) fn check_pivots(lu: &LU<f64, Dyn, Dyn>) -> Result<()> {
    let u = lu.u();
    let diag = u.diagonal();
    let max = diag.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min = diag.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    if !(max > 0.0) || !(min / max > SINGULAR_PIVOT_RATIO) {
        return Err(Error::numerical(format!(
            "singular system matrix (pivot ratio {:e})",
            if max > 0.0 { min / max } else { 0.0 }
        )));
    }
    Ok(())
}
