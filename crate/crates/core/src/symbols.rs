//! Symbols a(x, ξ) built from separable terms, test functions g with
//! g(0) = 0, and scaled derivative sup-norms.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Highest derivative order in the closed-form factor table.
pub const MAX_DERIVATIVE: usize = 4;

/// Inflation applied to sampled suprema so the estimate is biased upward.
pub const SAMPLING_INFLATION: f64 = 1.1;

const SAMPLES_PER_AXIS: usize = 8001;

/// Real-valued smooth factor, a product over coordinate axes of
/// one-dimensional profiles centered at `center`.
#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    Constant(f64),
    /// exp(−|x − c|²/(2w²))
    Gaussian { center: Point, width: f64 },
    /// Π_j (1 + cos(π (x_j − c_j)/R))/2 on |x_j − c_j| < R, zero outside.
    CosineWindow { center: Point, half_width: f64 },
    /// Π_j y_j^{p_j} exp(−y_j²/2), y = (x − c)/w.
    PolyBump {
        center: Point,
        width: f64,
        powers: [u32; 2],
    },
}

impl Factor {
    pub fn is_constant(&self) -> bool {
        matches!(self, Factor::Constant(_))
    }

    pub fn eval(&self, x: Point, dim: usize) -> f64 {
        self.derivative(x, [0, 0], dim)
    }

    /// ∂^β of the factor at `x`; orders above [`MAX_DERIVATIVE`] are not
    /// supported and evaluate through the same recurrences.
    pub fn derivative(&self, x: Point, beta: [usize; 2], dim: usize) -> f64 {
        match self {
            Factor::Constant(c) => {
                if beta[..dim].iter().all(|&b| b == 0) {
                    *c
                } else {
                    0.0
                }
            }
            _ => (0..dim).map(|j| self.axis_derivative(j, x[j], beta[j])).product(),
        }
    }

    fn axis_derivative(&self, axis: usize, x: f64, k: usize) -> f64 {
        match self {
            Factor::Constant(c) => {
                if k == 0 {
                    *c
                } else {
                    0.0
                }
            }
            Factor::Gaussian { center, width } => {
                let y = (x - center[axis]) / width;
                hermite_bump(0, y, k) / width.powi(k as i32)
            }
            Factor::PolyBump {
                center,
                width,
                powers,
            } => {
                let y = (x - center[axis]) / width;
                hermite_bump(powers[axis], y, k) / width.powi(k as i32)
            }
            Factor::CosineWindow { center, half_width } => {
                let y = x - center[axis];
                if y.abs() >= *half_width {
                    return 0.0;
                }
                let w = std::f64::consts::PI / half_width;
                if k == 0 {
                    0.5 * (1.0 + (w * y).cos())
                } else {
                    0.5 * w.powi(k as i32) * (w * y + 0.5 * std::f64::consts::PI * k as f64).cos()
                }
            }
        }
    }

    /// Sampling window of one axis, outside which the profile is negligible.
    fn axis_window(&self, axis: usize) -> Option<(f64, f64)> {
        match self {
            Factor::Constant(_) => None,
            Factor::Gaussian { center, width } => {
                Some((center[axis] - 10.0 * width, center[axis] + 10.0 * width))
            }
            Factor::PolyBump { center, width, .. } => {
                Some((center[axis] - 14.0 * width, center[axis] + 14.0 * width))
            }
            Factor::CosineWindow { center, half_width } => {
                Some((center[axis] - half_width, center[axis] + half_width))
            }
        }
    }

    /// Box outside which the factor is below ~1e−8 (exactly zero for the
    /// cosine window); `None` for constants.
    pub fn support_box(&self, dim: usize) -> Option<(Point, Point)> {
        let reach = match self {
            Factor::Constant(_) => return None,
            Factor::Gaussian { width, .. } => 6.0 * width,
            Factor::PolyBump { width, powers, .. } => {
                (6.0 + powers.iter().copied().max().unwrap_or(0) as f64) * width
            }
            Factor::CosineWindow { half_width, .. } => *half_width,
        };
        let c = self.center();
        let mut lo = [0.0; 2];
        let mut hi = [0.0; 2];
        for j in 0..dim {
            lo[j] = c[j] - reach;
            hi[j] = c[j] + reach;
        }
        Some((lo, hi))
    }

    fn center(&self) -> Point {
        match self {
            Factor::Constant(_) => [0.0, 0.0],
            Factor::Gaussian { center, .. }
            | Factor::PolyBump { center, .. }
            | Factor::CosineWindow { center, .. } => *center,
        }
    }

    /// max over |β| = k of sup |∂^β factor|. Exact for constants; otherwise
    /// the product of densely sampled per-axis suprema, inflated by
    /// [`SAMPLING_INFLATION`].
    pub fn derivative_sup(&self, k: usize, dim: usize) -> Result<f64> {
        if k > MAX_DERIVATIVE {
            return Err(Error::DerivativeOrder {
                order: k,
                max: MAX_DERIVATIVE,
            });
        }
        if let Factor::Constant(c) = self {
            return Ok(if k == 0 { c.abs() } else { 0.0 });
        }
        let mut axis_sup = vec![[0.0; MAX_DERIVATIVE + 1]; dim];
        for (j, sup) in axis_sup.iter_mut().enumerate() {
            let (a, b) = self.axis_window(j).expect("non-constant factor has a window");
            for (order, s) in sup.iter_mut().enumerate().take(k + 1) {
                let mut best: f64 = 0.0;
                for i in 0..SAMPLES_PER_AXIS {
                    let x = a + (b - a) * i as f64 / (SAMPLES_PER_AXIS - 1) as f64;
                    best = best.max(self.axis_derivative(j, x, order).abs());
                }
                *s = best;
            }
        }
        let mut best: f64 = 0.0;
        for_each_multi_index(k, dim, |beta| {
            let v: f64 = (0..dim).map(|j| axis_sup[j][beta[j]]).product();
            best = best.max(v);
        });
        Ok(SAMPLING_INFLATION * best)
    }
}

/// d^k/dy^k [y^p e^{−y²/2}] via the polynomial recurrence P ↦ P' − yP.
fn hermite_bump(p: u32, y: f64, k: usize) -> f64 {
    let mut poly = vec![0.0; p as usize + 1];
    poly[p as usize] = 1.0;
    for _ in 0..k {
        let mut next = vec![0.0; poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            if i > 0 {
                next[i - 1] += i as f64 * c;
            }
            next[i + 1] -= c;
        }
        poly = next;
    }
    let val = poly.iter().rev().fold(0.0, |acc, c| acc * y + c);
    val * (-0.5 * y * y).exp()
}

fn for_each_multi_index(k: usize, dim: usize, mut f: impl FnMut([usize; 2])) {
    if dim == 1 {
        f([k, 0]);
    } else {
        for a in 0..=k {
            f([a, k - a]);
        }
    }
}

/// One separable term `coeff · u(x) · v(ξ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub spatial: Factor,
    pub frequency: Factor,
}

/// A finite sum of separable terms.
#[derive(Clone, Debug, PartialEq)]
pub struct Symbol {
    dim: usize,
    terms: Vec<Term>,
}

impl Symbol {
    pub fn constant(dim: usize, value: Complex64) -> Self {
        Symbol {
            dim,
            terms: vec![Term {
                coeff: value,
                spatial: Factor::Constant(1.0),
                frequency: Factor::Constant(1.0),
            }],
        }
    }

    /// The symbol a ≡ 1.
    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Complex64::new(1.0, 0.0))
    }

    pub fn separable(dim: usize, spatial: Factor, frequency: Factor) -> Self {
        Self::sum(
            dim,
            vec![Term {
                coeff: Complex64::new(1.0, 0.0),
                spatial,
                frequency,
            }],
        )
        .expect("one term")
    }

    pub fn sum(dim: usize, terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Config("symbol needs at least one term".into()));
        }
        if !(1..=2).contains(&dim) {
            return Err(Error::Unsupported(format!("dimension {dim}")));
        }
        Ok(Symbol { dim, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_constant(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.spatial.is_constant() && t.frequency.is_constant())
    }

    pub fn is_separable(&self) -> bool {
        self.terms.len() == 1
    }

    /// Factors are real, so the symbol is real iff every coefficient is.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.im == 0.0)
    }

    /// Value of a constant symbol.
    pub fn constant_value(&self) -> Option<Complex64> {
        if !self.is_constant() {
            return None;
        }
        Some(self.eval([0.0; 2], [0.0; 2]))
    }

    pub fn eval(&self, x: Point, xi: Point) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.coeff * t.spatial.eval(x, self.dim) * t.frequency.eval(xi, self.dim))
            .sum()
    }

    /// Re a.
    pub fn real_part(&self) -> Symbol {
        self.map_coeffs(|c| Complex64::new(c.re, 0.0))
    }

    /// The complex conjugate symbol.
    pub fn conj(&self) -> Symbol {
        self.map_coeffs(|c| c.conj())
    }

    fn map_coeffs(&self, f: impl Fn(Complex64) -> Complex64) -> Symbol {
        Symbol {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: f(t.coeff),
                    ..t.clone()
                })
                .collect(),
        }
    }

    /// True when every term has a constant spatial factor (a = a(ξ)).
    pub fn is_frequency_only(&self) -> bool {
        self.terms.iter().all(|t| t.spatial.is_constant())
    }

    /// True when every term has a constant frequency factor (a = a(x)).
    pub fn is_position_only(&self) -> bool {
        self.terms.iter().all(|t| t.frequency.is_constant())
    }

    /// Union of the spatial supports of all non-constant spatial factors.
    pub fn spatial_support(&self) -> Option<(Point, Point)> {
        union_boxes(self.terms.iter().filter_map(|t| t.spatial.support_box(self.dim)), self.dim)
    }

    /// Union of the frequency supports of all non-constant frequency factors.
    pub fn frequency_support(&self) -> Option<(Point, Point)> {
        union_boxes(self.terms.iter().filter_map(|t| t.frequency.support_box(self.dim)), self.dim)
    }

    /// N^{(n,m)}(a; ℓ, ρ) = max_{k ≤ n, r ≤ m} ℓ^k ρ^r sup |∇_x^k ∇_ξ^r a|,
    /// estimated term by term from the factor suprema (an upper bound).
    pub fn norm_estimate(&self, n: usize, m: usize, ell: f64, rho: f64) -> Result<f64> {
        let max = (self.dim + 2).min(MAX_DERIVATIVE);
        for order in [n, m] {
            if order > max {
                return Err(Error::DerivativeOrder { order, max });
            }
        }
        let mut sups = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let u: Vec<f64> = (0..=n)
                .map(|k| t.spatial.derivative_sup(k, self.dim))
                .collect::<Result<_>>()?;
            let v: Vec<f64> = (0..=m)
                .map(|r| t.frequency.derivative_sup(r, self.dim))
                .collect::<Result<_>>()?;
            sups.push((t.coeff.norm(), u, v));
        }
        let mut best: f64 = 0.0;
        for k in 0..=n {
            for r in 0..=m {
                let s: f64 = sups.iter().map(|(c, u, v)| c * u[k] * v[r]).sum();
                best = best.max(ell.powi(k as i32) * rho.powi(r as i32) * s);
            }
        }
        Ok(best)
    }
}

fn union_boxes(boxes: impl Iterator<Item = (Point, Point)>, dim: usize) -> Option<(Point, Point)> {
    boxes.reduce(|(alo, ahi), (blo, bhi)| {
        let mut lo = alo;
        let mut hi = ahi;
        for j in 0..dim {
            lo[j] = lo[j].min(blo[j]);
            hi[j] = hi[j].max(bhi[j]);
        }
        (lo, hi)
    })
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A smooth real function with g(0) = 0 and an optional derivative.
#[derive(Clone)]
pub struct SmoothFunction {
    name: String,
    value: RealFn,
    derivative: Option<RealFn>,
}

impl fmt::Debug for SmoothFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothFunction")
            .field("name", &self.name)
            .field("has_derivative", &self.derivative.is_some())
            .finish()
    }
}

impl SmoothFunction {
    pub fn new(name: impl Into<String>, value: RealFn, derivative: Option<RealFn>) -> Result<Self> {
        let name = name.into();
        let g0 = value(0.0);
        if !(g0.abs() <= 1e-14) {
            return Err(Error::Config(format!("test function `{name}` has g(0) = {g0}, expected 0")));
        }
        Ok(SmoothFunction {
            name,
            value,
            derivative,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.value)(t)
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        match &self.derivative {
            Some(d) => Ok(d(t)),
            None => Err(Error::MissingDerivative(self.name.clone())),
        }
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }
}

/// The function g applied to the operator, with g(0) = 0.
#[derive(Clone, Debug)]
pub enum TestFunction {
    /// Σ_p c_p t^p with `coeffs[p - 1] = c_p`.
    Polynomial(Vec<f64>),
    Smooth(SmoothFunction),
}

impl TestFunction {
    /// g_p(t) = t^p.
    pub fn power(p: usize) -> Self {
        assert!(p >= 1, "g_p needs p >= 1");
        let mut c = vec![0.0; p];
        c[p - 1] = 1.0;
        TestFunction::Polynomial(c)
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        TestFunction::Polynomial(coeffs)
    }

    /// Catalogue of named smooth functions: `identity`, `square`,
    /// `t_minus_t2`, `xlogx_entropy`.
    pub fn named(name: &str) -> Result<Self> {
        let (value, derivative): (RealFn, RealFn) = match name {
            "identity" => (Arc::new(|t| t), Arc::new(|_| 1.0)),
            "square" => (Arc::new(|t| t * t), Arc::new(|t| 2.0 * t)),
            "t_minus_t2" => (Arc::new(|t| t - t * t), Arc::new(|t| 1.0 - 2.0 * t)),
            // binary entropy; arguments are clamped to [0, 1]
            "xlogx_entropy" => (
                Arc::new(|t: f64| {
                    let t = t.clamp(0.0, 1.0);
                    let a = if t > 0.0 { -t * t.ln() } else { 0.0 };
                    let b = if t < 1.0 { -(1.0 - t) * (1.0 - t).ln() } else { 0.0 };
                    a + b
                }),
                Arc::new(|t: f64| {
                    let t = t.clamp(0.0, 1.0);
                    ((1.0 - t) / t).ln()
                }),
            ),
            _ => return Err(Error::Config(format!("unknown test function `{name}`"))),
        };
        Ok(TestFunction::Smooth(SmoothFunction::new(name, value, Some(derivative))?))
    }

    pub fn label(&self) -> String {
        match self {
            TestFunction::Polynomial(c) => {
                let parts: Vec<String> = c
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0.0)
                    .map(|(i, c)| format!("{c}*t^{}", i + 1))
                    .collect();
                if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join("+")
                }
            }
            TestFunction::Smooth(s) => s.name.clone(),
        }
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self, TestFunction::Polynomial(_))
    }

    /// Polynomial degree (None for smooth kind).
    pub fn degree(&self) -> Option<usize> {
        match self {
            TestFunction::Polynomial(c) => Some(c.iter().rposition(|v| *v != 0.0).map_or(0, |i| i + 1)),
            TestFunction::Smooth(_) => None,
        }
    }

    /// g(t). Polynomials accept complex t (Horner); smooth kinds accept
    /// real t only.
    pub fn eval(&self, t: Complex64) -> Result<Complex64> {
        match self {
            TestFunction::Polynomial(c) => {
                let inner = c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c);
                Ok(inner * t)
            }
            TestFunction::Smooth(s) => {
                if t.im != 0.0 {
                    return Err(Error::ComplexArgument(s.name.clone()));
                }
                Ok(Complex64::new(s.eval(t.re), 0.0))
            }
        }
    }

    pub fn eval_real(&self, t: f64) -> f64 {
        match self {
            TestFunction::Polynomial(c) => t * c.iter().rev().fold(0.0, |acc, c| acc * t + c),
            TestFunction::Smooth(s) => s.eval(t),
        }
    }

    /// g'(t) for real t.
    pub fn derivative_real(&self, t: f64) -> Result<f64> {
        match self {
            TestFunction::Polynomial(c) => Ok(c
                .iter()
                .enumerate()
                .map(|(i, c)| (i + 1) as f64 * c * t.powi(i as i32))
                .sum()),
            TestFunction::Smooth(s) => s.derivative(t),
        }
    }

    /// g'(t) for complex t (polynomials only).
    pub fn derivative(&self, t: Complex64) -> Result<Complex64> {
        match self {
            TestFunction::Polynomial(c) => Ok(c
                .iter()
                .enumerate()
                .map(|(i, c)| (i + 1) as f64 * c * t.powi(i as i32))
                .sum()),
            TestFunction::Smooth(s) => {
                if t.im != 0.0 {
                    return Err(Error::ComplexArgument(s.name.clone()));
                }
                Ok(Complex64::new(s.derivative(t.re)?, 0.0))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn constant_symbol_evaluates_everywhere() {
        let a = Symbol::one(2);
        assert_eq!(a.eval([3.0, -1.0], [0.2, 7.0]), c(1.0));
        assert!(a.is_constant() && a.is_real() && a.is_separable());
    }

    #[test]
    fn bump_peak() {
        let a = Symbol::separable(
            1,
            Factor::Gaussian {
                center: [0.0, 0.0],
                width: 1.0,
            },
            Factor::Constant(1.0),
        );
        assert_eq!(a.eval([0.0, 0.0], [5.0, 0.0]), c(1.0));
        assert!(!a.is_constant());
    }

    #[test]
    fn separable_product_is_exact() {
        let u = Factor::CosineWindow {
            center: [0.1, -0.2],
            half_width: 0.7,
        };
        let v = Factor::PolyBump {
            center: [0.0, 0.5],
            width: 0.4,
            powers: [1, 2],
        };
        let a = Symbol::separable(2, u.clone(), v.clone());
        for (x, xi) in [([0.2, 0.1], [0.3, -0.4]), ([-0.3, 0.0], [1.0, 1.0])] {
            assert_eq!(a.eval(x, xi).re, u.eval(x, 2) * v.eval(xi, 2));
        }
    }

    #[test]
    fn gaussian_derivative_sup_matches_critical_point() {
        let g = Factor::Gaussian {
            center: [0.0, 0.0],
            width: 1.0,
        };
        // sup |d/dx e^{−x²/2}| is attained at |x| = 1
        let s = g.derivative_sup(1, 1).unwrap();
        let exact = (-0.5f64).exp();
        assert!((s / SAMPLING_INFLATION - exact).abs() < 1e-6);
        assert!(s >= exact);
    }

    #[test]
    fn closed_form_derivatives_agree_with_finite_differences() {
        let factors = [
            Factor::Gaussian {
                center: [0.3, 0.0],
                width: 0.7,
            },
            Factor::PolyBump {
                center: [0.0, 0.0],
                width: 1.3,
                powers: [2, 0],
            },
            Factor::CosineWindow {
                center: [0.0, 0.0],
                half_width: 2.0,
            },
        ];
        let h = 1e-5;
        for f in &factors {
            for k in 0..MAX_DERIVATIVE {
                for &x in &[-0.9, 0.15, 0.6] {
                    let fd = (f.derivative([x + h, 0.0], [k, 0], 1) - f.derivative([x - h, 0.0], [k, 0], 1))
                        / (2.0 * h);
                    let exact = f.derivative([x, 0.0], [k + 1, 0], 1);
                    assert!((fd - exact).abs() < 1e-5 * (1.0 + exact.abs()), "{f:?} k={k} x={x}");
                }
            }
        }
    }

    #[test]
    fn norm_of_constant_is_its_modulus() {
        let a = Symbol::one(2);
        for (n, m, l, r) in [(0, 0, 1.0, 1.0), (2, 3, 5.0, 0.1), (4, 4, 2.0, 2.0)] {
            assert_eq!(a.norm_estimate(n, m, l, r).unwrap(), 1.0);
        }
        assert!(matches!(
            a.norm_estimate(5, 0, 1.0, 1.0),
            Err(Error::DerivativeOrder { .. })
        ));
        assert!(Symbol::one(1).norm_estimate(4, 0, 1.0, 1.0).is_err());
    }

    #[test]
    fn norm_scaling_law_and_monotonicity() {
        let a = Symbol::separable(
            1,
            Factor::Gaussian {
                center: [0.0, 0.0],
                width: 0.5,
            },
            Factor::CosineWindow {
                center: [1.0, 0.0],
                half_width: 0.5,
            },
        );
        for n in 0..=3 {
            for m in 0..=3 {
                let base = a.norm_estimate(n, m, 0.7, 1.3).unwrap();
                let doubled = a.norm_estimate(n, m, 1.4, 1.3).unwrap();
                assert!(doubled <= 2f64.powi(n as i32) * base * (1.0 + 1e-12));
                assert!(doubled >= base);
                if n < 3 {
                    assert!(a.norm_estimate(n + 1, m, 0.7, 1.3).unwrap() >= base);
                }
            }
        }
    }

    #[test]
    fn eval_g_examples() {
        let g2 = TestFunction::power(2);
        assert_eq!(g2.eval(c(1.0)).unwrap(), c(1.0));
        let g = TestFunction::polynomial(vec![1.0, -1.0]);
        assert_eq!(g.eval(c(0.5)).unwrap(), c(0.25));
        for g in [
            g2,
            g,
            TestFunction::named("t_minus_t2").unwrap(),
            TestFunction::named("xlogx_entropy").unwrap(),
        ] {
            assert_eq!(g.eval(c(0.0)).unwrap(), c(0.0));
        }
    }

    #[test]
    fn smooth_rejects_complex_argument() {
        let g = TestFunction::named("t_minus_t2").unwrap();
        assert!(matches!(
            g.eval(Complex64::new(0.5, 0.1)),
            Err(Error::ComplexArgument(_))
        ));
        let p = TestFunction::power(3);
        let z = Complex64::new(0.5, 0.1);
        assert!((p.eval(z).unwrap() - z * z * z).norm() < 1e-15);
    }

    #[test]
    fn nonzero_at_origin_is_rejected() {
        let r = SmoothFunction::new("shifted", Arc::new(|t| t + 1.0), None);
        assert!(r.is_err());
    }

    #[test]
    fn real_flag_matches_sampling() {
        let a = Symbol::sum(
            2,
            vec![Term {
                coeff: c(0.7),
                spatial: Factor::Gaussian {
                    center: [0.0, 0.0],
                    width: 1.0,
                },
                frequency: Factor::CosineWindow {
                    center: [0.0, 0.0],
                    half_width: 2.0,
                },
            }],
        )
        .unwrap();
        assert!(a.is_real());
        let mut rng = StdRng::seed_from_u64(12345);
        let mut next = || rng.random_range(-2.0..2.0);
        for _ in 0..1000 {
            let v = a.eval([next(), next()], [next(), next()]);
            assert_eq!(v.im, 0.0);
        }
    }

    proptest::proptest! {
        #[test]
        fn real_polynomials_are_real_on_reals(
            coeffs in proptest::collection::vec(-3.0f64..3.0, 1..6),
            t in -2.0f64..2.0,
        ) {
            let g = TestFunction::polynomial(coeffs);
            proptest::prop_assert_eq!(g.eval(c(t)).unwrap().im, 0.0);
        }
    }
}
