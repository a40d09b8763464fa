use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::generator::{assemble_discrete_generator, Layout};
use super::stepper::check_pivots;
use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::state::{CoupledState, Parameters};

/// Solves `A_h Y = rhs` for `Y = (u, v, p)` in the discrete domain.
///
/// The first block gives `v = rhs.u` directly. The remaining velocity and heat rows form
/// a `(2 nx + 1)`-dimensional system in `(u_1..u_nx, p_0..p_nx)`, solved by LU.
pub fn solve_resolvent(params: &Parameters, rhs: &CoupledState, g: &SpatialGrid) -> Result<CoupledState> {
    params.validate()?;
    if params.c < PI * PI / 8.0 || (params.b * params.d / params.c).abs() > 1.0 {
        return Err(Error::Precondition(format!(
            "resolvent needs c >= pi^2/8 and |bd/c| <= 1 (c = {}, bd/c = {})",
            params.c,
            params.b * params.d / params.c
        )));
    }
    for f in [&rhs.wave.u, &rhs.wave.v, &rhs.heat.p] {
        g.check_len(f, "rhs")?;
    }
    let nx = g.nx();
    let gen = assemble_discrete_generator(params, g);
    let y_rhs = Layout::pack_coupled(nx, rhs);
    // v is known: v_j = rhs.u_j
    let v: Vec<f64> = y_rhs.as_slice()[..nx].to_vec();

    let m = 2 * nx + 1;
    let mut mat = DMatrix::zeros(m, m);
    let mut b = DVector::zeros(m);
    for (k, row) in (nx..3 * nx + 1).enumerate() {
        b[k] = y_rhs[row];
        for &(col, val) in gen.sparse().row(row) {
            if col < nx {
                mat[(k, col)] += val;
            } else if col < 2 * nx {
                b[k] -= val * v[col - nx];
            } else {
                mat[(k, col - nx)] += val;
            }
        }
    }
    let lu = mat.lu();
    check_pivots(&lu).map_err(|e| match e {
        Error::Numerical { message, .. } => {
            Error::numerical(format!("resolvent system: {message}"))
        }
        other => other,
    })?;
    let z = lu
        .solve(&b)
        .ok_or_else(|| Error::numerical("resolvent system is singular"))?;
    if !z.iter().all(|x| x.is_finite()) {
        return Err(Error::numerical("resolvent solution is not finite"));
    }
    let mut y = DVector::zeros(3 * nx + 1);
    y.as_mut_slice()[..nx].copy_from_slice(&z.as_slice()[..nx]);
    y.as_mut_slice()[nx..2 * nx].copy_from_slice(&v);
    y.as_mut_slice()[2 * nx..].copy_from_slice(&z.as_slice()[nx..]);
    Ok(Layout::unpack_coupled(nx, &y, rhs.t))
}
