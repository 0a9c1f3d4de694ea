//! The coefficients W0, W1 and A(g; s) of the two-term asymptotics
//!
//!   tr g(T_α) ≈ α^d W0(g(a)) + α^{d−1} log α · W1(A(g; a)),
//!
//! and least-squares extraction of the log coefficient from sweep data.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::gauss::{gauss_legendre, gauss_on};
use crate::geometry::{
    surface_quadrature, surface_rule_on, volume_quadrature, BoundaryPatch, Domain, Point,
    QuadratureRule,
};
use crate::symbols::{Symbol, TestFunction};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Number of dyadic panels towards each endpoint in the A(g; s) quadrature.
const GRADED_PANELS: i32 = 40;
const PANEL_ORDER: usize = 16;

/// Harmonic number H_n (H_0 = 0).
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// A(g; s) = (1/4π²) ∫_0^1 (g(st) − t g(s)) / (t(1 − t)) dt.
///
/// Polynomials use A(t^p; s) = −s^p H_{p−1}/(4π²); smooth functions go
/// through [`coeff_a_quadrature`].
pub fn coeff_a(g: &TestFunction, s: Complex64) -> Result<Complex64> {
    match g {
        TestFunction::Polynomial(c) => Ok(c
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(i, c)| {
                let p = i + 1;
                -*c * s.powi(p as i32) * harmonic(p - 1) / (4.0 * PI * PI)
            })
            .sum()),
        TestFunction::Smooth(_) => coeff_a_quadrature(g, s),
    }
}

/// Quadrature path for A(g; s): Gauss–Legendre on panels graded
/// geometrically towards both endpoints, with the removable endpoint
/// values s g'(0) − g(s) and g(s) − s g'(s) substituted where t(1 − t)
/// vanishes in floating point.
pub fn coeff_a_quadrature(g: &TestFunction, s: Complex64) -> Result<Complex64> {
    if let TestFunction::Smooth(f) = g {
        if !f.has_derivative() {
            return Err(Error::MissingDerivative(f.name().to_string()));
        }
    }
    let gs = g.eval(s)?;
    let integrand = |t: f64| -> Result<Complex64> {
        if t <= 0.0 {
            return Ok(s * g.derivative(ZERO)? - gs);
        }
        if t >= 1.0 {
            return Ok(gs - s * g.derivative(s)?);
        }
        Ok((g.eval(s * t)? - t * gs) / (t * (1.0 - t)))
    };
    let (x, w) = gauss_legendre(PANEL_ORDER);
    let mut breaks = vec![0.0];
    for k in (1..=GRADED_PANELS).rev() {
        breaks.push(0.5f64.powi(k));
    }
    let mirrored: Vec<f64> = breaks.iter().rev().skip(1).map(|b| 1.0 - b).collect();
    breaks.extend(mirrored);
    let mut sum = ZERO;
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        for (xi, wi) in x.iter().zip(&w) {
            sum += wi * half * integrand(mid + half * xi)?;
        }
    }
    Ok(sum / (4.0 * PI * PI))
}

/// W0(b) = (2π)^{−d} ∫_Λ ∫_Ω b(x, ξ) dξ dx.
pub fn coeff_w0<F>(b: F, lambda: &Domain, omega: &Domain, level: usize) -> Result<Complex64>
where
    F: Fn(Point, Point) -> Result<Complex64>,
{
    check_level(level)?;
    if lambda.dim() != omega.dim() {
        return Err(Error::Config("Λ and Ω have different dimensions".into()));
    }
    if lambda.is_complement() || omega.is_complement() {
        return Err(Error::Unsupported("W0 of an unbounded domain".into()));
    }
    let rx = volume_quadrature(lambda, level)?;
    let rxi = volume_quadrature(omega, level)?;
    let mut sum = ZERO;
    for (x, wx) in rx.nodes.iter().zip(&rx.weights) {
        for (xi, wxi) in rxi.nodes.iter().zip(&rxi.weights) {
            sum += wx * wxi * b(*x, *xi)?;
        }
    }
    Ok(sum / (2.0 * PI).powi(lambda.dim() as i32))
}

/// W1(b) = (2π)^{−(d−1)} ∫_{∂Λ} ∫_{∂Ω} b(x, ξ) |n_Λ(x)·n_Ω(ξ)| dS_ξ dS_x.
///
/// In d = 1 this is the sum over boundary point pairs. In d = 2 the inner
/// integral over a curved patch is split where |n·n| has kinks; if only the
/// Λ patch is curved the order of integration is swapped.
pub fn coeff_w1<F>(
    b: F,
    boundary_lambda: &[BoundaryPatch],
    boundary_omega: &[BoundaryPatch],
    level: usize,
) -> Result<Complex64>
where
    F: Fn(Point, Point) -> Result<Complex64>,
{
    check_level(level)?;
    let mut sum = ZERO;
    let mut dim = 2;
    for pl in boundary_lambda {
        for po in boundary_omega {
            if pl.is_point() || po.is_point() {
                if !(pl.is_point() && po.is_point()) {
                    return Err(Error::Config("boundary patches of different dimensions".into()));
                }
                dim = 1;
                let (x, xi) = (pl.point(0.5), po.point(0.5));
                let dot = pl.normal(0.5)[0] * po.normal(0.5)[0];
                sum += dot.abs() * b(x, xi)?;
                continue;
            }
            sum += if pl.is_curved() && !po.is_curved() {
                patch_pair(po, pl, level, |xi, x| b(x, xi))?
            } else {
                patch_pair(pl, po, level, &b)?
            };
        }
    }
    Ok(sum / (2.0 * PI).powi(dim - 1))
}

/// ∫_outer ∫_inner f(x, y) |n(x)·n(y)| dS_y dS_x.
fn patch_pair<F>(outer: &BoundaryPatch, inner: &BoundaryPatch, level: usize, f: F) -> Result<Complex64>
where
    F: Fn(Point, Point) -> Result<Complex64>,
{
    let ro = surface_quadrature(outer, level);
    let no = ro.normals.as_ref().expect("surface rules carry normals");
    let fixed_inner = (!inner.is_curved()).then(|| surface_quadrature(inner, level));
    let mut sum = ZERO;
    for ((x, wx), nx) in ro.nodes.iter().zip(&ro.weights).zip(no) {
        let split;
        let ri: &QuadratureRule = match &fixed_inner {
            Some(r) => r,
            None => {
                split = split_rule(inner, *nx, level);
                &split
            }
        };
        let ni = ri.normals.as_ref().expect("surface rules carry normals");
        for ((y, wy), ny) in ri.nodes.iter().zip(&ri.weights).zip(ni) {
            let dot = (nx[0] * ny[0] + nx[1] * ny[1]).abs();
            if dot != 0.0 {
                sum += wx * wy * dot * f(*x, *y)?;
            }
        }
    }
    Ok(sum)
}

fn split_rule(patch: &BoundaryPatch, dir: Point, level: usize) -> QuadratureRule {
    let mut cuts = vec![0.0];
    cuts.extend(patch.orthogonality_params(dir));
    cuts.push(1.0);
    let n = crate::geometry::gauss_points(level);
    let mut ts = Vec::new();
    let mut ws = Vec::new();
    for pair in cuts.windows(2) {
        let (t, w) = gauss_on(n, pair[0], pair[1]);
        ts.extend(t);
        ws.extend(w);
    }
    surface_rule_on(patch, &ts, &ws)
}

fn check_level(level: usize) -> Result<()> {
    if level == 0 {
        return Err(Error::Config("quadrature level must be at least 1".into()));
    }
    Ok(())
}

/// Two-term prediction for tr g(T_α(a; Λ, Ω)).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    /// Coefficient of α^d; absent for unbounded Λ, where only the
    /// regularized difference is meaningful.
    pub w0: Option<Complex64>,
    /// Coefficient of α^{d−1} log α.
    pub w1: Complex64,
    pub dim: usize,
    pub g: String,
    pub symmetrized: bool,
    pub level: usize,
}

impl Prediction {
    /// α^d W0 (zero when W0 is absent).
    pub fn w0_term(&self, alpha: f64) -> Complex64 {
        self.w0.unwrap_or(ZERO) * alpha.powi(self.dim as i32)
    }

    /// α^{d−1} log α W1.
    pub fn w1_term(&self, alpha: f64) -> Complex64 {
        self.w1 * alpha.powi(self.dim as i32 - 1) * alpha.ln()
    }
}

/// W0 of g(a) and W1 of A(g; a); with `symmetrized`, a is replaced by Re a.
pub fn predict(
    g: &TestFunction,
    a: &Symbol,
    lambda: &Domain,
    omega: &Domain,
    symmetrized: bool,
    level: usize,
) -> Result<Prediction> {
    let dim = lambda.dim();
    if omega.dim() != dim || a.dim() != dim {
        return Err(Error::Config("dimension mismatch between symbol and domains".into()));
    }
    let a = if symmetrized { a.real_part() } else { a.clone() };
    let boundary_l = lambda.boundary_patches();
    let boundary_o = omega.boundary_patches();
    let (w0, w1) = match a.constant_value() {
        Some(c) => {
            let w0 = if lambda.is_complement() {
                None
            } else {
                Some(g.eval(c)? * lambda.volume() * omega.volume() / (2.0 * PI).powi(dim as i32))
            };
            let geom = coeff_w1(|_, _| Ok(Complex64::new(1.0, 0.0)), &boundary_l, &boundary_o, level)?;
            (w0, coeff_a(g, c)? * geom)
        }
        None => {
            let w0 = if lambda.is_complement() {
                None
            } else {
                Some(coeff_w0(|x, xi| g.eval(a.eval(x, xi)), lambda, omega, level)?)
            };
            let w1 = coeff_w1(|x, xi| coeff_a(g, a.eval(x, xi)), &boundary_l, &boundary_o, level)?;
            (w0, w1)
        }
    };
    Ok(Prediction {
        w0,
        w1,
        dim,
        g: g.label(),
        symmetrized,
        level,
    })
}

/// Least-squares extraction of the α^{d−1} log α coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub c_log: f64,
    pub c_plain: f64,
    /// Fitted α^d coefficient when W0 was not supplied.
    pub c_volume: Option<f64>,
    /// Euclidean norm of the residual vector.
    pub residual: f64,
    /// Condition number of the column-scaled design matrix.
    pub condition: f64,
    pub window: (f64, f64),
    pub n_points: usize,
}

/// Fits value(α) − w0 α^d ≈ c_log α^{d−1} log α + c_plain α^{d−1}
/// (+ c_volume α^d when `w0_known` is `None`) over the points with α in
/// `window` (all points when `None`).
pub fn fit_log_coefficient(
    points: &[(f64, f64)],
    w0_known: Option<f64>,
    d: usize,
    window: Option<(f64, f64)>,
) -> Result<FitResult> {
    let mut pts: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|(a, v)| a.is_finite() && v.is_finite())
        .filter(|(a, _)| window.is_none_or(|(lo, hi)| *a >= lo && *a <= hi))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.dedup_by(|a, b| a.0 == b.0);
    if pts.len() < 3 {
        return Err(Error::Fit(format!(
            "need at least 3 distinct alpha values in the window, got {}",
            pts.len()
        )));
    }
    let ncols = if w0_known.is_some() { 2 } else { 3 };
    if pts.len() < ncols {
        return Err(Error::Fit("fewer points than unknowns".into()));
    }
    let dd = d as i32;
    let mut x = DMatrix::<f64>::zeros(pts.len(), ncols);
    let mut y = DVector::<f64>::zeros(pts.len());
    for (i, (a, v)) in pts.iter().enumerate() {
        let base = a.powi(dd - 1);
        x[(i, 0)] = base * a.ln();
        x[(i, 1)] = base;
        if ncols == 3 {
            x[(i, 2)] = a.powi(dd);
        }
        y[i] = v - w0_known.unwrap_or(0.0) * a.powi(dd);
    }
    let scales: Vec<f64> = (0..ncols).map(|j| x.column(j).norm()).collect();
    if scales.iter().any(|s| *s == 0.0) {
        return Err(Error::Fit("degenerate design matrix".into()));
    }
    for (j, s) in scales.iter().enumerate() {
        x.column_mut(j).scale_mut(1.0 / s);
    }
    let svd = x.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-13 * smax) {
        return Err(Error::Fit("singular design matrix (alpha values too clustered)".into()));
    }
    let coef = svd
        .solve(&y, 0.0)
        .map_err(|e| Error::Fit(e.to_string()))?;
    let resid = (&x * &coef - &y).norm();
    let c: Vec<f64> = (0..ncols).map(|j| coef[j] / scales[j]).collect();
    Ok(FitResult {
        c_log: c[0],
        c_plain: c[1],
        c_volume: (ncols == 3).then(|| c[2]),
        residual: resid,
        condition: smax / smin,
        window: (pts[0].0, pts[pts.len() - 1].0),
        n_points: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FOUR_PI2: f64 = 4.0 * PI * PI;

    fn one(_: Point, _: Point) -> Result<Complex64> {
        Ok(Complex64::new(1.0, 0.0))
    }

    #[test]
    fn a_closed_form_examples() {
        let s1 = Complex64::new(1.0, 0.0);
        assert_eq!(coeff_a(&TestFunction::power(1), s1).unwrap(), ZERO);
        let a2 = coeff_a(&TestFunction::power(2), s1).unwrap();
        assert!((a2.re + 1.0 / FOUR_PI2).abs() < 1e-16);
        let tt = TestFunction::polynomial(vec![1.0, -1.0]);
        assert!((coeff_a(&tt, s1).unwrap().re - 1.0 / FOUR_PI2).abs() < 1e-16);
        let named = TestFunction::named("t_minus_t2").unwrap();
        assert!((coeff_a(&named, s1).unwrap().re - 1.0 / FOUR_PI2).abs() < 1e-14);
    }

    #[test]
    fn a_quadrature_matches_closed_form() {
        for p in 1..=8 {
            let g = TestFunction::power(p);
            for s in [
                Complex64::new(1.0, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.0, 1.0),
            ] {
                let q = coeff_a_quadrature(&g, s).unwrap();
                let c = coeff_a(&g, s).unwrap();
                assert!((q - c).norm() < 1e-10, "p={p} s={s}: {q} vs {c}");
            }
        }
    }

    #[test]
    fn a_of_linear_smooth_function_vanishes() {
        let id = TestFunction::named("identity").unwrap();
        assert!(coeff_a(&id, Complex64::new(0.7, 0.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn a_of_entropy_is_finite_and_positive() {
        let h = TestFunction::named("xlogx_entropy").unwrap();
        let v = coeff_a(&h, Complex64::new(1.0, 0.0)).unwrap();
        // ∫_0^1 h(t)/(t(1−t)) dt = π²/3
        assert!((v.re - (PI * PI / 3.0) / FOUR_PI2).abs() < 1e-9, "{v}");
    }

    #[test]
    fn w0_examples() {
        let sq = Domain::rect([0.0, 0.0], [1.0, 1.0]).unwrap();
        let big = Domain::rect([-1.0, -1.0], [1.0, 1.0]).unwrap();
        let w = coeff_w0(one, &sq, &big, 4).unwrap();
        assert!((w.re - 1.0 / (PI * PI)).abs() < 1e-14);
        let w = coeff_w0(|x, _| Ok(Complex64::new(x[0], 0.0)), &sq, &big, 4).unwrap();
        assert!((w.re - 1.0 / (2.0 * PI * PI)).abs() < 1e-14);
        let l = Domain::interval(0.0, 1.0).unwrap();
        let o = Domain::interval(-1.0, 1.0).unwrap();
        assert!((coeff_w0(one, &l, &o, 2).unwrap().re - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn w1_examples() {
        let sq = Domain::rect([0.0, 0.0], [1.0, 1.0]).unwrap();
        let w = coeff_w1(one, &sq.boundary_patches(), &sq.boundary_patches(), 4).unwrap();
        assert!((w.re - 4.0 / PI).abs() < 1e-12);
        let disk = Domain::disk([0.0, 0.0], 1.0).unwrap();
        let w = coeff_w1(one, &disk.boundary_patches(), &disk.boundary_patches(), 4).unwrap();
        assert!((w.re - 4.0).abs() < 1e-10, "{w}");
        let l = Domain::interval(0.0, 1.0).unwrap();
        let o = Domain::interval(-1.0, 1.0).unwrap();
        let w = coeff_w1(one, &l.boundary_patches(), &o.boundary_patches(), 1).unwrap();
        assert_eq!(w.re, 4.0);
    }

    #[test]
    fn w1_mixed_shapes_and_swap_symmetry() {
        let sq = Domain::rect([0.0, 0.0], [1.0, 1.0]).unwrap();
        let disk = Domain::disk([0.3, 0.0], 1.0).unwrap();
        let a = coeff_w1(one, &sq.boundary_patches(), &disk.boundary_patches(), 4).unwrap();
        let b = coeff_w1(one, &disk.boundary_patches(), &sq.boundary_patches(), 4).unwrap();
        // four edges × ∫|cos| over the circle = 16, over 2π
        assert!((a.re - 8.0 / PI).abs() < 1e-10, "{a}");
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn w1_converges_with_level() {
        let tri = Domain::polygon(vec![[0.0, 0.0], [1.0, 0.2], [0.3, 0.9]]).unwrap();
        let disk = Domain::disk([0.0, 0.0], 0.7).unwrap();
        let f = |x: Point, xi: Point| Ok(Complex64::new((x[0] + xi[1]).cos(), 0.0));
        let w4 = coeff_w1(f, &tri.boundary_patches(), &disk.boundary_patches(), 4).unwrap();
        let w8 = coeff_w1(f, &tri.boundary_patches(), &disk.boundary_patches(), 8).unwrap();
        assert!((w4 - w8).norm() < 1e-8 * w8.norm());
    }

    #[test]
    fn predictions_in_one_dimension() {
        let l = Domain::interval(0.0, 1.0).unwrap();
        let o = Domain::interval(-1.0, 1.0).unwrap();
        let a = Symbol::one(1);
        let p = predict(&TestFunction::power(2), &a, &l, &o, false, 4).unwrap();
        assert!((p.w0.unwrap().re - 1.0 / PI).abs() < 1e-15);
        assert!((p.w1.re + 1.0 / (PI * PI)).abs() < 1e-15);
        let p = predict(&TestFunction::polynomial(vec![1.0, -1.0]), &a, &l, &o, false, 4).unwrap();
        assert_eq!(p.w0.unwrap().re, 0.0);
        assert!((p.w1.re - 1.0 / (PI * PI)).abs() < 1e-15);
        let p = predict(&TestFunction::power(1), &a, &l, &o, false, 4).unwrap();
        assert_eq!(p.w1, ZERO);
    }

    #[test]
    fn w1_scales_as_power_of_constant_symbol() {
        let l = Domain::rect([0.0, 0.0], [1.0, 1.0]).unwrap();
        let o = Domain::disk([0.0, 0.0], 1.0).unwrap();
        let base = predict(&TestFunction::power(3), &Symbol::one(2), &l, &o, false, 4).unwrap();
        let c = Complex64::new(0.0, 2.0);
        let scaled = predict(&TestFunction::power(3), &Symbol::constant(2, c), &l, &o, false, 4).unwrap();
        assert!((scaled.w1 - base.w1 * c.powi(3)).norm() < 1e-14);
    }

    #[test]
    fn fit_recovers_exact_model() {
        let (c0, c1, c2) = (0.1, -0.03, 0.7);
        let pts: Vec<(f64, f64)> = [8.0, 12.0, 16.0, 24.0, 32.0, 48.0]
            .iter()
            .map(|&a: &f64| (a, c0 * a * a + c1 * a * a.ln() + c2 * a))
            .collect();
        let f = fit_log_coefficient(&pts, Some(c0), 2, None).unwrap();
        assert!((f.c_log - c1).abs() < 1e-10 && (f.c_plain - c2).abs() < 1e-10);
        let f = fit_log_coefficient(&pts, None, 2, None).unwrap();
        assert!((f.c_log - c1).abs() < 1e-10);
        assert!((f.c_volume.unwrap() - c0).abs() < 1e-10);
    }

    #[test]
    fn fit_tolerates_lower_order_term() {
        let (c0, c1, c2, c3) = (0.1, -0.03, 0.7, 1.0);
        let pts: Vec<(f64, f64)> = (0..20)
            .map(|k| 100.0 * 1.5f64.powi(k))
            .map(|a| (a, c0 * a * a + c1 * a * a.ln() + c2 * a + c3))
            .collect();
        let f = fit_log_coefficient(&pts, Some(c0), 2, None).unwrap();
        assert!(((f.c_log - c1) / c1).abs() < 1e-3, "{f:?}");
    }

    #[test]
    fn fit_errors() {
        assert!(fit_log_coefficient(&[(1.0, 1.0), (2.0, 1.0)], Some(0.0), 1, None).is_err());
        let same = [(5.0, 1.0), (5.0, 2.0), (5.0, 3.0)];
        assert!(fit_log_coefficient(&same, Some(0.0), 1, None).is_err());
    }
}
