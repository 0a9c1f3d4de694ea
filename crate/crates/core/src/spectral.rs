//! Traces tr g(T), eigenvalues, trace norms, commutator norms and the
//! regularized trace difference for unbounded Λ.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::operators::{
    Backend, DiscreteOperator, Quantization, Resolution, TorusComposition, TorusGrid,
};
use crate::symbols::{Symbol, TestFunction};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Hermiticity defect above which an operator flagged Hermitian is rejected.
const HERMITIAN_TOL: f64 = 1e-10;

/// C = A B, columns in parallel, each column accumulated in a fixed order.
pub fn matmul(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    assert_eq!(a.ncols(), b.nrows());
    let (n, m) = (a.nrows(), b.ncols());
    let cols: Vec<Vec<Complex64>> = (0..m)
        .into_par_iter()
        .map(|j| {
            let mut c = vec![ZERO; n];
            for k in 0..a.ncols() {
                let bkj = b[(k, j)];
                if bkj == ZERO {
                    continue;
                }
                for (ci, aik) in c.iter_mut().zip(a.column(k).iter()) {
                    *ci += aik * bkj;
                }
            }
            c
        })
        .collect();
    DMatrix::from_fn(n, m, |i, j| cols[j][i])
}

/// tr(X Y) = Σ_ij X_ij Y_ji without forming the product.
pub fn trace_of_product(x: &DMatrix<Complex64>, y: &DMatrix<Complex64>) -> Complex64 {
    assert_eq!(x.ncols(), y.nrows());
    assert_eq!(x.nrows(), y.ncols());
    let per_col: Vec<Complex64> = (0..x.ncols())
        .into_par_iter()
        .map(|j| {
            // Σ_i X_ij Y_ji
            x.column(j).iter().zip(y.row(j).iter()).map(|(a, b)| a * b).sum()
        })
        .collect();
    per_col.iter().sum()
}

fn diagonal_sum(m: &DMatrix<Complex64>) -> Complex64 {
    m.diagonal().iter().sum()
}

/// tr T^p for p = 1..=p_max. Powers up to ⌈p_max/2⌉ are formed explicitly;
/// tr T^p is then contracted from two of them.
pub fn trace_poly(op: &DiscreteOperator, p_max: usize) -> Vec<Complex64> {
    trace_powers(&op.matrix, p_max)
}

/// [`trace_poly`] on a bare matrix.
pub fn trace_powers(m: &DMatrix<Complex64>, p_max: usize) -> Vec<Complex64> {
    if p_max == 0 {
        return Vec::new();
    }
    let half = p_max.div_ceil(2);
    let mut powers = vec![m.clone()];
    for _ in 1..half {
        let next = matmul(powers.last().unwrap(), m);
        powers.push(next);
    }
    (1..=p_max)
        .map(|p| {
            if p == 1 {
                diagonal_sum(m)
            } else {
                let a = p.div_ceil(2);
                trace_of_product(&powers[a - 1], &powers[p - a - 1])
            }
        })
        .collect()
}

/// Σ_k c_k tr T^k for a polynomial test function with coefficients c_1, c_2, ...
pub fn trace_polynomial(op: &DiscreteOperator, coeffs: &[f64]) -> Complex64 {
    trace_powers(&op.matrix, coeffs.len())
        .iter()
        .zip(coeffs)
        .map(|(t, c)| t * *c)
        .sum()
}

fn require_hermitian(op: &DiscreteOperator) -> Result<()> {
    let defect = op.hermitian_defect();
    if !op.hermitian || defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }
    Ok(())
}

/// Ascending eigenvalues of a Hermitian operator.
pub fn eigenvalues(op: &DiscreteOperator) -> Result<Vec<f64>> {
    require_hermitian(op)?;
    Ok(hermitian_eigenvalues(&op.matrix))
}

pub(crate) fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Result of [`trace_smooth_with`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothTrace {
    pub value: f64,
    /// Largest distance an eigenvalue was moved by clamping to [0, 1].
    pub clamp_delta: f64,
}

/// Σ g(λ_i) over the eigenvalues of a Hermitian operator, clamping to [0, 1]
/// for operators built from a ≡ 1.
pub fn trace_smooth(op: &DiscreteOperator, g: &TestFunction) -> Result<f64> {
    Ok(trace_smooth_with(op, g, op.unit_symbol)?.value)
}

pub fn trace_smooth_with(op: &DiscreteOperator, g: &TestFunction, clamp_unit: bool) -> Result<SmoothTrace> {
    let ev = eigenvalues(op)?;
    Ok(smooth_sum(&ev, g, clamp_unit))
}

pub(crate) fn smooth_sum(ev: &[f64], g: &TestFunction, clamp_unit: bool) -> SmoothTrace {
    let mut delta: f64 = 0.0;
    let value = ev
        .iter()
        .map(|&l| {
            let t = if clamp_unit { l.clamp(0.0, 1.0) } else { l };
            delta = delta.max((t - l).abs());
            g.eval_real(t)
        })
        .sum();
    SmoothTrace {
        value,
        clamp_delta: delta,
    }
}

/// Sum of singular values.
pub fn trace_norm(op: &DiscreteOperator) -> f64 {
    trace_norm_matrix(&op.matrix)
}

pub fn trace_norm_matrix(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().sum()
}

/// Spectral data of one operator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectralSummary {
    pub alpha: f64,
    pub backend: Backend,
    pub n_dof: usize,
    pub eigenvalues: Option<Vec<f64>>,
    /// tr T^p, p = 1, 2, ...
    pub traces_of_powers: Vec<Complex64>,
    pub trace_norm: Option<f64>,
    pub resolution: Option<Resolution>,
}

pub fn summarize(
    op: &DiscreteOperator,
    p_max: usize,
    with_eigenvalues: bool,
    with_trace_norm: bool,
    resolution: Option<&Resolution>,
) -> Result<SpectralSummary> {
    Ok(SpectralSummary {
        alpha: op.alpha,
        backend: op.backend,
        n_dof: op.dim(),
        eigenvalues: if with_eigenvalues { Some(eigenvalues(op)?) } else { None },
        traces_of_powers: trace_poly(op, p_max),
        trace_norm: with_trace_norm.then(|| trace_norm(op)),
        resolution: resolution.cloned(),
    })
}

/// One row of [`commutator_growth`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutatorRow {
    pub alpha: f64,
    /// ‖[Op_α(b), χ_Λ]‖_{S_1}
    pub lambda_norm: f64,
    /// ‖[Op_α(b), P_{Ω,α}]‖_{S_1}
    pub omega_norm: f64,
    /// lambda_norm / α^{d−1}
    pub lambda_ratio: f64,
    /// omega_norm / α^{d−1}
    pub omega_ratio: f64,
    pub n_dof: usize,
}

/// Trace norms of [Op_α(b), χ_Λ] and [Op_α(b), P_{Ω,α}] on the full torus,
/// one planned grid per α.
pub fn commutator_growth(
    b: &Symbol,
    lambda: &Domain,
    omega: &Domain,
    alphas: &[f64],
    res: &Resolution,
) -> Result<Vec<CommutatorRow>> {
    if alphas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("alphas must be strictly increasing".into()));
    }
    let d = lambda.dim() as i32;
    alphas
        .iter()
        .map(|&alpha| {
            let grid = TorusGrid::plan(lambda, omega, alpha, Some(b), res)?;
            let (cl, co) = commutators(b, lambda, omega, &grid)?;
            let lambda_norm = trace_norm_matrix(&cl);
            let omega_norm = trace_norm_matrix(&co);
            let scale = alpha.powi(d - 1);
            Ok(CommutatorRow {
                alpha,
                lambda_norm,
                omega_norm,
                lambda_ratio: lambda_norm / scale,
                omega_ratio: omega_norm / scale,
                n_dof: grid.len(),
            })
        })
        .collect()
}

/// Full-torus matrices of [Op_α(b), χ_Λ] and [Op_α(b), P_{Ω,α}].
pub fn commutators(
    b: &Symbol,
    lambda: &Domain,
    omega: &Domain,
    grid: &TorusGrid,
) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
    grid.check(Some(lambda), omega, b)?;
    let comp = TorusComposition::new(b, Some(omega), grid, Quantization::Left);
    let all: Vec<usize> = (0..grid.len()).collect();
    let op = comp.columns(&all, &all, |c, x, s| c.apply_symbol(x, s));
    let chi: Vec<f64> = all
        .iter()
        .map(|&i| if lambda.contains(grid.node(i)) { 1.0 } else { 0.0 })
        .collect();
    // (Op χ − χ Op)_ij = Op_ij (χ_j − χ_i)
    let with_lambda = DMatrix::from_fn(all.len(), all.len(), |i, j| op[(i, j)] * (chi[j] - chi[i]));
    let with_omega = comp.columns(&all, &all, |c, x, s| {
        let mut y = x.to_vec();
        c.apply_projection(&mut y, s);
        c.apply_symbol(&mut y, s);
        c.apply_symbol(x, s);
        c.apply_projection(x, s);
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi - *xi;
        }
    });
    Ok((with_lambda, with_omega))
}

/// Compressions Q A^k Q, k = 1..=p, of A = P Op_α(a) P to the nodes `dofs`.
fn compressed_powers(comp: &TorusComposition, dofs: &[usize], p: usize) -> Vec<DMatrix<Complex64>> {
    let len = comp.grid().len();
    let cols: Vec<Vec<Vec<Complex64>>> = dofs
        .par_iter()
        .map_init(
            || (vec![ZERO; len], Vec::new()),
            |(x, scratch), &c| {
                x.iter_mut().for_each(|z| *z = ZERO);
                x[c] = Complex64::new(1.0, 0.0);
                (0..p)
                    .map(|_| {
                        comp.apply(x, scratch);
                        dofs.iter().map(|&r| x[r]).collect()
                    })
                    .collect()
            },
        )
        .collect();
    let n = dofs.len();
    (0..p)
        .map(|k| DMatrix::from_fn(n, n, |i, j| cols[j][k][i]))
        .collect()
}

/// tr[g_p(T_α(a; Λ, Ω)) − χ_Λ g_p(T_α(a; R^d, Ω)) χ_Λ] on the torus, where
/// R^d is realized by the whole periodic cell.
///
/// Bounded Λ: tr(C_1^p) − tr(C_p) with C_k = χ_Λ A^k χ_Λ. Complement Λ with
/// excluded set B: (A(1 − χ_B))^p is expanded over words in {A, −Aχ_B}; every
/// word containing χ_B is a product of the compressions B_k = χ_B A^k χ_B, so
/// only matrices of the size of B are formed.
pub fn regularized_trace_diff(
    a: &Symbol,
    lambda: &Domain,
    omega: &Domain,
    alpha: f64,
    p: usize,
    grid: &TorusGrid,
) -> Result<Complex64> {
    if p == 0 {
        return Err(Error::Config("p must be at least 1".into()));
    }
    if (grid.alpha - alpha).abs() > 1e-12 * alpha {
        return Err(Error::Config(format!(
            "grid was planned for alpha = {}, not {alpha}",
            grid.alpha
        )));
    }
    grid.check(Some(lambda), omega, a)?;
    let comp = TorusComposition::new(a, Some(omega), grid, Quantization::Left);
    match lambda.complement_inner() {
        None => {
            let dofs = grid.indices_in(lambda);
            let c = compressed_powers(&comp, &dofs, p);
            let tr_pow = trace_powers(&c[0], p)[p - 1];
            Ok(tr_pow - diagonal_sum(&c[p - 1]))
        }
        Some(inner) => {
            let dofs = grid.indices_in(inner);
            let b = compressed_powers(&comp, &dofs, p);
            let mut total = diagonal_sum(&b[p - 1]);
            for mask in 1u32..(1 << p) {
                let pos: Vec<usize> = (0..p).filter(|i| mask & (1 << i) != 0).collect();
                let m = pos.len();
                // cyclic gaps between consecutive χ_B positions
                let gaps: Vec<usize> = (0..m)
                    .map(|j| {
                        let next = if j + 1 < m { pos[j + 1] } else { pos[0] + p };
                        next - pos[j]
                    })
                    .collect();
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                total += sign * trace_of_word(&b, &gaps);
            }
            Ok(total)
        }
    }
}

fn trace_of_word(b: &[DMatrix<Complex64>], gaps: &[usize]) -> Complex64 {
    match gaps {
        [k] => diagonal_sum(&b[k - 1]),
        [first, middle @ .., last] => {
            let mut acc = b[first - 1].clone();
            for k in middle {
                acc = matmul(&acc, &b[k - 1]);
            }
            trace_of_product(&acc, &b[last - 1])
        }
        [] => ZERO,
    }
}
