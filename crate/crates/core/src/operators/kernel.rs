//! Closed-form kernels of the spectral projection P_{Ω,α}:
//! K_α(t) = (α/2π)^d ∫_Ω e^{iα t·ξ} dξ.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::gauss::gauss_on;
use crate::geometry::{Domain, Point, Shape};

/// Below this value of |αt|·diam(Ω) the polygon transform is integrated
/// numerically instead of through the edge formula.
const POLYGON_SMALL_ARGUMENT: f64 = 1.0;

/// sin(x)/x.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// 2 J_1(z)/z, equal to 1 at the origin.
fn jinc(z: f64) -> f64 {
    if z.abs() < 1e-3 {
        let z2 = z * z;
        1.0 - z2 / 8.0 + z2 * z2 / 192.0
    } else {
        2.0 * libm::j1(z) / z
    }
}

#[derive(Clone, Debug)]
enum Form {
    Box { center: Point, half: Point },
    Ball { center: Point, radius: f64 },
    Polygon {
        // (outward normal · length, midpoint, edge vector)
        edges: Vec<(Point, Point, Point)>,
        triangles: Vec<[Point; 3]>,
        diam: f64,
    },
}

/// Precomputed projection kernel of one frequency domain at one α.
#[derive(Clone, Debug)]
pub struct ProjectionKernel {
    dim: usize,
    alpha: f64,
    area: f64,
    form: Form,
}

impl ProjectionKernel {
    pub fn new(omega: &Domain, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Config(format!("alpha must be positive, got {alpha}")));
        }
        let dim = omega.dim();
        let form = match omega.shape() {
            Shape::Box { lo, hi } => Form::Box {
                center: [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])],
                half: [0.5 * (hi[0] - lo[0]), 0.5 * (hi[1] - lo[1])],
            },
            Shape::Ball { center, radius } => Form::Ball {
                center: *center,
                radius: *radius,
            },
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                let edges = (0..n)
                    .map(|i| {
                        let a = vertices[i];
                        let b = vertices[(i + 1) % n];
                        let e = [b[0] - a[0], b[1] - a[1]];
                        // outward normal times length for a counterclockwise polygon
                        ([e[1], -e[0]], [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])], e)
                    })
                    .collect();
                Form::Polygon {
                    edges,
                    triangles: omega.triangles()?,
                    diam: omega.diam(),
                }
            }
            Shape::Complement { .. } => {
                return Err(Error::Unsupported(
                    "projection kernel of an unbounded frequency domain".into(),
                ))
            }
        };
        Ok(ProjectionKernel {
            dim,
            alpha,
            area: omega.volume(),
            form,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// K_α(0) = α^d |Ω| / (2π)^d.
    pub fn at_origin(&self) -> f64 {
        (self.alpha / (2.0 * PI)).powi(self.dim as i32) * self.area
    }

    pub fn eval(&self, t: Point) -> Complex64 {
        let a = self.alpha;
        match &self.form {
            Form::Box { center, half } => {
                let mut v = Complex64::new(1.0, 0.0);
                for j in 0..self.dim {
                    let amp = a * half[j] / PI * sinc(a * half[j] * t[j]);
                    v *= Complex64::from_polar(amp, a * center[j] * t[j]);
                }
                v
            }
            Form::Ball { center, radius } => {
                let r = t[0].hypot(t[1]);
                let amp = a * a * radius * radius / (4.0 * PI) * jinc(a * radius * r);
                Complex64::from_polar(amp, a * (center[0] * t[0] + center[1] * t[1]))
            }
            Form::Polygon {
                edges,
                triangles,
                diam,
            } => {
                let k = [a * t[0], a * t[1]];
                let k2 = k[0] * k[0] + k[1] * k[1];
                let scale = (a / (2.0 * PI)).powi(2);
                if k2.sqrt() * diam < POLYGON_SMALL_ARGUMENT {
                    return scale * polygon_transform_quadrature(triangles, k);
                }
                // divergence theorem: ∫_Ω e^{ik·ξ} = (−i/|k|²) Σ_e (k·n_e) ℓ_e e^{ik·m_e} sinc(k·e/2)
                let mut s = Complex64::new(0.0, 0.0);
                for (nl, m, e) in edges {
                    let kn = k[0] * nl[0] + k[1] * nl[1];
                    let phase = k[0] * m[0] + k[1] * m[1];
                    let ke = 0.5 * (k[0] * e[0] + k[1] * e[1]);
                    s += Complex64::from_polar(kn * sinc(ke), phase);
                }
                scale * Complex64::new(0.0, -1.0) * s / k2
            }
        }
    }
}

fn polygon_transform_quadrature(triangles: &[[Point; 3]], k: Point) -> Complex64 {
    let (ts, ws) = gauss_on(12, 0.0, 1.0);
    let mut s = Complex64::new(0.0, 0.0);
    for &[a, b, c] in triangles {
        let det = ((b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])).abs();
        for (u, wu) in ts.iter().zip(&ws) {
            for (v, wv) in ts.iter().zip(&ws) {
                let x = a[0] + u * ((b[0] - a[0]) + v * (c[0] - b[0]));
                let y = a[1] + u * ((b[1] - a[1]) + v * (c[1] - b[1]));
                s += Complex64::from_polar(wu * wv * u * det, k[0] * x + k[1] * y);
            }
        }
    }
    s
}

/// K_α(t) for a single evaluation.
pub fn projection_kernel(omega: &Domain, alpha: f64, t: Point) -> Result<Complex64> {
    Ok(ProjectionKernel::new(omega, alpha)?.eval(t))
}
