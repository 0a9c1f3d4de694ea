//! Discretizations of P_{Ω,α}, Op_α(a) and the truncated operators
//! T_α(a; Λ, Ω), S_α(a; Λ, Ω) and T_α(a; R^d, Ω).
//!
//! Two backends: a Nyström discretization of the continuum projection kernel
//! (`analytic_dense`, a ≡ const only) and an exact finite composition on a
//! padded periodic lattice (`torus_fft`).

mod dense;
mod dump;
mod fft;
mod kernel;
mod torus;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::Point;

pub use dense::{assemble_dense, dense_mesh};
pub use dump::{read_whop, write_whop};
pub use kernel::{projection_kernel, ProjectionKernel};
pub use torus::{
    assemble_fullspace, assemble_torus, assemble_torus_with, TorusComposition, TorusGrid,
};

/// Minimum points per wavelength accepted by the resolution guards.
pub const MIN_PPW: f64 = 6.0;
/// Minimum torus padding factor accepted by the resolution guards.
pub const MIN_PAD: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    AnalyticDense,
    TorusFft,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::AnalyticDense => "analytic_dense",
            Backend::TorusFft => "torus_fft",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantization {
    #[default]
    Left,
    Right,
}

/// Resolution parameters shared by both backends.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Resolution {
    /// Points per oscillation wavelength 2π/(α R_Ω).
    pub ppw: f64,
    /// Torus side as a multiple of diam(Λ ∪ spatial support).
    pub pad_factor: f64,
    /// Explicit points per torus side; disables lattice tuning.
    pub n_override: Option<usize>,
    /// Gauss points per panel of the dense Nyström mesh.
    pub panel_order: usize,
    /// Pick N in a small window to minimize the lattice counting error of tr T_α(1).
    pub tune_lattice: bool,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution {
            ppw: 6.0,
            pad_factor: 3.0,
            n_override: None,
            panel_order: 16,
            tune_lattice: true,
        }
    }
}

/// Nodes underlying a discrete operator.
#[derive(Clone, Debug)]
pub enum GridInfo {
    /// Nyström nodes with their quadrature weights.
    Dense { nodes: Vec<Point>, weights: Vec<f64> },
    /// Torus lattice and the flat indices of the retained nodes.
    Torus { grid: TorusGrid, dofs: Vec<usize> },
}

impl GridInfo {
    pub fn nodes(&self) -> Vec<Point> {
        match self {
            GridInfo::Dense { nodes, .. } => nodes.clone(),
            GridInfo::Torus { grid, dofs } => dofs.iter().map(|&i| grid.node(i)).collect(),
        }
    }

    /// Quadrature weights (dense) or the uniform lattice cell volume (torus).
    pub fn weights(&self) -> Vec<f64> {
        match self {
            GridInfo::Dense { weights, .. } => weights.clone(),
            GridInfo::Torus { grid, dofs } => vec![grid.cell_volume(); dofs.len()],
        }
    }
}

/// A finite matrix representation of one of the truncated operators.
#[derive(Clone, Debug)]
pub struct DiscreteOperator {
    pub matrix: DMatrix<Complex64>,
    pub alpha: f64,
    pub grid: GridInfo,
    pub backend: Backend,
    pub hermitian: bool,
    /// Built from the symbol a ≡ 1 (spectrum known to lie in [0, 1]).
    pub unit_symbol: bool,
}

impl DiscreteOperator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// max |M − M*| / max |M|.
    pub fn hermitian_defect(&self) -> f64 {
        hermitian_defect(&self.matrix)
    }

    /// The Hermitian part (M + M*)/2. For torus operators this equals the
    /// compression of P Re Op(a) P, since compression commutes with adjoints.
    pub fn symmetrize(&self) -> DiscreteOperator {
        let mut out = self.clone();
        if !self.hermitian {
            out.matrix = hermitian_part(&self.matrix);
        }
        out.hermitian = true;
        out
    }
}

/// Free-function form of [`DiscreteOperator::symmetrize`].
pub fn symmetrize(op: &DiscreteOperator) -> DiscreteOperator {
    op.symmetrize()
}

pub(crate) fn hermitian_part(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = m.nrows();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(m[(i, i)].re, 0.0)
        } else {
            0.5 * (m[(i, j)] + m[(j, i)].conj())
        }
    })
}

pub(crate) fn hermitian_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut scale: f64 = 0.0;
    let mut defect: f64 = 0.0;
    for j in 0..n {
        for i in 0..n {
            scale = scale.max(m[(i, j)].norm());
            defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    if scale == 0.0 {
        0.0
    } else {
        defect / scale
    }
}
