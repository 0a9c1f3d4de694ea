use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::kernel::ProjectionKernel;
use super::{Backend, DiscreteOperator, GridInfo, Resolution, MIN_PPW};
use crate::error::{Error, Result};
use crate::geometry::{mesh_quadrature, Domain, QuadratureRule};
use crate::symbols::Symbol;

/// Nyström mesh of Λ satisfying h ≤ 2π/(ppw α R_Ω).
pub fn dense_mesh(
    lambda: &Domain,
    omega: &Domain,
    alpha: f64,
    res: &Resolution,
) -> Result<QuadratureRule> {
    let r = omega.sup_norm_radius();
    let (lo, hi) = lambda.bbox();
    let extent = (0..lambda.dim()).map(|j| hi[j] - lo[j]).fold(0.0, f64::max);
    let h_max = 2.0 * PI / (MIN_PPW * alpha * r);
    let required = (extent / h_max).ceil() as usize;
    if res.ppw < MIN_PPW {
        return Err(Error::guard(
            "ppw",
            format!(
                "ppw = {} is below {MIN_PPW}; at alpha = {alpha} the mesh needs N >= {required} nodes per side",
                res.ppw
            ),
        ));
    }
    let h = match res.n_override {
        Some(n) => {
            if n < required {
                return Err(Error::guard(
                    "ppw",
                    format!("N = {n} nodes per side is too coarse at alpha = {alpha}; need N >= {required}"),
                ));
            }
            extent / n as f64
        }
        None => 2.0 * PI / (res.ppw * alpha * r),
    };
    mesh_quadrature(lambda, h, res.panel_order.max(1))
}

/// Nyström discretization √w_i K_α(x_i − x_j) √w_j of χ_Λ P_{Ω,α} χ_Λ,
/// scaled by the constant value of `a`.
pub fn assemble_dense(
    a: &Symbol,
    lambda: &Domain,
    omega: &Domain,
    alpha: f64,
    res: &Resolution,
) -> Result<DiscreteOperator> {
    let c = a.constant_value().ok_or_else(|| {
        Error::Unsupported("the dense backend handles constant symbols only".into())
    })?;
    if lambda.dim() != omega.dim() || a.dim() != lambda.dim() {
        return Err(Error::Config("dimension mismatch between symbol and domains".into()));
    }
    let kernel = ProjectionKernel::new(omega, alpha)?;
    let rule = dense_mesh(lambda, omega, alpha, res)?;
    let n = rule.len();
    let sw: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
    let nodes = &rule.nodes;

    // lower triangle, one row per task
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..=i)
                .map(|j| {
                    let t = [nodes[i][0] - nodes[j][0], nodes[i][1] - nodes[j][1]];
                    sw[i] * sw[j] * kernel.eval(t)
                })
                .collect()
        })
        .collect();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i == j {
                m[(i, i)] = c * v.re;
            } else {
                m[(i, j)] = c * v;
                m[(j, i)] = c * v.conj();
            }
        }
    }
    Ok(DiscreteOperator {
        matrix: m,
        alpha,
        grid: GridInfo::Dense {
            nodes: rule.nodes,
            weights: rule.weights,
        },
        backend: Backend::AnalyticDense,
        hermitian: c.im == 0.0,
        unit_symbol: c == Complex64::new(1.0, 0.0),
    })
}
