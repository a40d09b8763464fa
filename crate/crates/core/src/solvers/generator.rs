//! Method-of-lines semi-discretization of the three systems.
//!
//! Boundary conditions are folded into the matrices through ghost nodes:
//!
//! ```text
//! u_{nx+1} = u_{nx-1} + 2h (-a v_nx + b p_0)      wave, x = 1
//! p_{-1}   = p_1      - 2h c p_0                  heat, x = 0
//! p_{nx+1} = p_{nx-1} + 2h d u_nx                 heat, x = 1
//! ```
//!
//! The Dirichlet node `u_0 = v_0 = 0` is eliminated.

use nalgebra::{DMatrix, DVector};

use crate::grid::SpatialGrid;
use crate::state::{CoupledState, HeatField, Parameters, WaveField};

/// Row-compressed sparse matrix, used for the explicit half of each time step.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    n: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseOperator {
    fn new(n: usize) -> Self {
        Self {
            n,
            rows: vec![Vec::new(); n],
        }
    }

    fn add(&mut self, row: usize, col: usize, value: f64) {
        if value == 0.0 {
            return;
        }
        match self.rows[row].iter_mut().find(|(c, _)| *c == col) {
            Some(entry) => entry.1 += value,
            None => self.rows[row].push((col, value)),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn mul_vec(&self, y: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(
            self.n,
            self.rows
                .iter()
                .map(|r| r.iter().map(|&(c, v)| v * y[c]).sum::<f64>()),
        )
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, v) in r {
                m[(i, j)] += v;
            }
        }
        m
    }
}

/// Unknown ordering of a discretized system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// `[u_1..u_nx | v_1..v_nx | p_0..p_nx]`
    Coupled { nx: usize },
    /// `[u_1..u_nx | v_1..v_nx]`
    Wave { nx: usize },
    /// `[p_0..p_nx]`
    Heat { nx: usize },
}

impl Layout {
    pub fn dim(&self) -> usize {
        match *self {
            Layout::Coupled { nx } => 3 * nx + 1,
            Layout::Wave { nx } => 2 * nx,
            Layout::Heat { nx } => nx + 1,
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            Layout::Coupled { nx } => format!(
                "u[1..={nx}] at 0..{nx}, v[1..={nx}] at {nx}..{}, p[0..={nx}] at {}..{}",
                2 * nx,
                2 * nx,
                3 * nx + 1
            ),
            Layout::Wave { nx } => {
                format!("u[1..={nx}] at 0..{nx}, v[1..={nx}] at {nx}..{}", 2 * nx)
            }
            Layout::Heat { nx } => format!("p[0..={nx}] at 0..{}", nx + 1),
        }
    }

    pub(crate) fn pack_wave(nx: usize, w: &WaveField, out: &mut [f64]) {
        out[..nx].copy_from_slice(&w.u[1..]);
        out[nx..2 * nx].copy_from_slice(&w.v[1..]);
    }

    pub(crate) fn unpack_wave(nx: usize, y: &[f64]) -> WaveField {
        let mut u = Vec::with_capacity(nx + 1);
        u.push(0.0);
        u.extend_from_slice(&y[..nx]);
        let mut v = Vec::with_capacity(nx + 1);
        v.push(0.0);
        v.extend_from_slice(&y[nx..2 * nx]);
        WaveField { u, v }
    }

    pub fn pack_coupled(nx: usize, s: &CoupledState) -> DVector<f64> {
        let mut y = DVector::zeros(3 * nx + 1);
        Self::pack_wave(nx, &s.wave, y.as_mut_slice());
        y.as_mut_slice()[2 * nx..].copy_from_slice(&s.heat.p);
        y
    }

    pub fn unpack_coupled(nx: usize, y: &DVector<f64>, t: f64) -> CoupledState {
        let ys = y.as_slice();
        CoupledState {
            wave: Self::unpack_wave(nx, ys),
            heat: HeatField {
                p: ys[2 * nx..].to_vec(),
            },
            t,
        }
    }
}

/// Dense matrix of the semi-discrete operator `(u, v, p) ↦ (v, u_xx, ε⁻¹ p_xx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteGenerator {
    pub matrix: DMatrix<f64>,
    pub layout: Layout,
    pub ordering: String,
    pub(crate) sparse: SparseOperator,
}

impl DiscreteGenerator {
    fn from_sparse(sparse: SparseOperator, layout: Layout) -> Self {
        Self {
            matrix: sparse.to_dense(),
            ordering: layout.describe(),
            layout,
            sparse,
        }
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn sparse(&self) -> &SparseOperator {
        &self.sparse
    }

    /// Applies the generator to a full state (coupled layout only).
    pub fn apply(&self, s: &CoupledState) -> CoupledState {
        let Layout::Coupled { nx } = self.layout else {
            panic!("apply() needs the coupled layout");
        };
        let y = Layout::pack_coupled(nx, s);
        Layout::unpack_coupled(nx, &self.sparse.mul_vec(&y), s.t)
    }
}

/// Wave rows `u_t = v`, `v_t = u_xx`. The ghost node at x = 1 leaves a `(2/h) u_x(1)`
/// term in the last velocity row, added by the caller.
fn wave_rows(op: &mut SparseOperator, nx: usize, h: f64) {
    let inv_h2 = 1.0 / (h * h);
    for j in 1..=nx {
        op.add(j - 1, nx + j - 1, 1.0);
    }
    for j in 1..nx {
        let r = nx + j - 1;
        if j > 1 {
            op.add(r, j - 2, inv_h2);
        }
        op.add(r, j - 1, -2.0 * inv_h2);
        op.add(r, j, inv_h2);
    }
    let r = 2 * nx - 1;
    op.add(r, nx - 2, 2.0 * inv_h2);
    op.add(r, nx - 1, -2.0 * inv_h2);
}

/// Heat rows `p_t = scale · p_xx` with Robin condition `p_x(0) = c p(0)`.
/// Right-boundary flux coupling is added by the caller.
fn heat_rows(op: &mut SparseOperator, offset: usize, nx: usize, h: f64, c: f64, scale: f64) {
    let k = scale / (h * h);
    op.add(offset, offset, -2.0 * k - 2.0 * k * h * c);
    op.add(offset, offset + 1, 2.0 * k);
    for j in 1..nx {
        op.add(offset + j, offset + j - 1, k);
        op.add(offset + j, offset + j, -2.0 * k);
        op.add(offset + j, offset + j + 1, k);
    }
    op.add(offset + nx, offset + nx - 1, 2.0 * k);
    op.add(offset + nx, offset + nx, -2.0 * k);
}

/// Generator of the full coupled system.
pub fn assemble_discrete_generator(params: &Parameters, g: &SpatialGrid) -> DiscreteGenerator {
    let nx = g.nx();
    let h = g.h();
    let layout = Layout::Coupled { nx };
    let mut op = SparseOperator::new(layout.dim());
    wave_rows(&mut op, nx, h);
    // v_nx row: (2/h) u_x(1) with u_x(1) = -a v_nx + b p_0
    let r = 2 * nx - 1;
    op.add(r, 2 * nx - 1, -2.0 * params.a / h);
    op.add(r, 2 * nx, 2.0 * params.b / h);

    let scale = 1.0 / params.epsilon;
    heat_rows(&mut op, 2 * nx, nx, h, params.c, scale);
    // p_nx row: (2 scale / h) p_x(1) with p_x(1) = d u_nx
    op.add(3 * nx, nx - 1, 2.0 * scale * params.d / h);
    DiscreteGenerator::from_sparse(op, layout)
}

/// Generator of the reduced wave system with `u_x(1) = -a u_t(1) + (bd/c) u(1)`.
pub fn assemble_reduced_generator(params: &Parameters, g: &SpatialGrid) -> DiscreteGenerator {
    let nx = g.nx();
    let h = g.h();
    let layout = Layout::Wave { nx };
    let mut op = SparseOperator::new(layout.dim());
    wave_rows(&mut op, nx, h);
    let r = 2 * nx - 1;
    op.add(r, 2 * nx - 1, -2.0 * params.a / h);
    op.add(r, nx - 1, 2.0 * params.b * params.d / (params.c * h));
    DiscreteGenerator::from_sparse(op, layout)
}

/// Generator of the boundary-layer heat system in the stretched time,
/// `p_x(0) = c p(0)`, `p_x(1) = 0`.
pub fn assemble_layer_generator(c: f64, g: &SpatialGrid) -> DiscreteGenerator {
    let nx = g.nx();
    let layout = Layout::Heat { nx };
    let mut op = SparseOperator::new(layout.dim());
    heat_rows(&mut op, 0, nx, g.h(), c, 1.0);
    DiscreteGenerator::from_sparse(op, layout)
}
