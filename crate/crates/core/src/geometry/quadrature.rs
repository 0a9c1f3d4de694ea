use std::f64::consts::PI;

use super::gauss::{composite_gauss, gauss_on};
use super::{BoundaryPatch, Domain, Point, Shape};
use crate::error::{Error, Result};

/// Nodes, positive weights and (for surface rules) outward normals.
#[derive(Clone, Debug, Default)]
pub struct QuadratureRule {
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
    pub normals: Option<Vec<Point>>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, mut f: impl FnMut(Point) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }

    fn extend(&mut self, other: QuadratureRule) {
        self.nodes.extend(other.nodes);
        self.weights.extend(other.weights);
    }
}

/// Gauss points per parameter direction at a quadrature level.
pub fn gauss_points(level: usize) -> usize {
    4 * level.max(1)
}

fn tensor_box(dim: usize, xs: [(Vec<f64>, Vec<f64>); 2]) -> QuadratureRule {
    let mut rule = QuadratureRule::default();
    if dim == 1 {
        for (x, w) in xs[0].0.iter().zip(&xs[0].1) {
            rule.nodes.push([*x, 0.0]);
            rule.weights.push(*w);
        }
        return rule;
    }
    for (x, wx) in xs[0].0.iter().zip(&xs[0].1) {
        for (y, wy) in xs[1].0.iter().zip(&xs[1].1) {
            rule.nodes.push([*x, *y]);
            rule.weights.push(wx * wy);
        }
    }
    rule
}

fn polar_rule(center: Point, radial: (Vec<f64>, Vec<f64>), angular: usize) -> QuadratureRule {
    let mut rule = QuadratureRule::default();
    let dth = 2.0 * PI / angular as f64;
    for (r, wr) in radial.0.iter().zip(&radial.1) {
        for k in 0..angular {
            let th = (k as f64 + 0.5) * dth;
            rule.nodes.push([center[0] + r * th.cos(), center[1] + r * th.sin()]);
            rule.weights.push(wr * r * dth);
        }
    }
    rule
}

fn triangle_rule(t: &[Point; 3], n: usize) -> QuadratureRule {
    // Collapsed (Duffy) tensor rule: x = A + u((B − A) + v(C − B)), |J| = u·2|T|.
    let [a, b, c] = *t;
    let det = ((b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])).abs();
    let (us, wu) = gauss_on(n, 0.0, 1.0);
    let (vs, wv) = gauss_on(n, 0.0, 1.0);
    let mut rule = QuadratureRule::default();
    for (u, wu) in us.iter().zip(&wu) {
        for (v, wv) in vs.iter().zip(&wv) {
            let x = a[0] + u * ((b[0] - a[0]) + v * (c[0] - b[0]));
            let y = a[1] + u * ((b[1] - a[1]) + v * (c[1] - b[1]));
            rule.nodes.push([x, y]);
            rule.weights.push(wu * wv * u * det);
        }
    }
    rule
}

/// Pieces of `bbox \ inner` for a box `inner`.
fn box_complement_pieces(lo: Point, hi: Point, blo: Point, bhi: Point, dim: usize) -> Vec<(Point, Point)> {
    let mut out = Vec::new();
    if dim == 1 {
        out.push(([blo[0], 0.0], [lo[0], 0.0]));
        out.push(([hi[0], 0.0], [bhi[0], 0.0]));
        return out;
    }
    out.push(([blo[0], blo[1]], [bhi[0], lo[1]]));
    out.push(([blo[0], hi[1]], [bhi[0], bhi[1]]));
    out.push(([blo[0], lo[1]], [lo[0], hi[1]]));
    out.push(([hi[0], lo[1]], [bhi[0], hi[1]]));
    out
}

/// Volume rule of a domain at `level`: tensor Gauss for boxes, polar Gauss
/// for disks, collapsed triangle Gauss over an ear-clipping triangulation
/// for polygons, box pieces for box complements.
pub fn volume_quadrature(domain: &Domain, level: usize) -> Result<QuadratureRule> {
    let n = gauss_points(level);
    let dim = domain.dim();
    match domain.shape() {
        Shape::Box { lo, hi } => Ok(tensor_box(
            dim,
            [gauss_on(n, lo[0], hi[0]), gauss_on(n, lo[1], hi[1])],
        )),
        Shape::Ball { center, radius } => {
            Ok(polar_rule(*center, gauss_on(n, 0.0, *radius), 2 * n))
        }
        Shape::Polygon { .. } => {
            let mut rule = QuadratureRule::default();
            for t in domain.triangles()? {
                rule.extend(triangle_rule(&t, n));
            }
            Ok(rule)
        }
        Shape::Complement {
            inner,
            bbox_lo,
            bbox_hi,
        } => match inner.shape() {
            Shape::Box { lo, hi } => {
                let mut rule = QuadratureRule::default();
                for (a, b) in box_complement_pieces(*lo, *hi, *bbox_lo, *bbox_hi, dim) {
                    rule.extend(tensor_box(dim, [gauss_on(n, a[0], b[0]), gauss_on(n, a[1], b[1])]));
                }
                Ok(rule)
            }
            _ => Err(Error::Unsupported(
                "volume quadrature of a complement needs a box inner shape".into(),
            )),
        },
    }
}

/// Volume rule with node spacing at most `h`, built from panels of `order`
/// Gauss points. Used as the Nyström mesh of the dense backend.
pub fn mesh_quadrature(domain: &Domain, h: f64, order: usize) -> Result<QuadratureRule> {
    if !(h > 0.0) || order == 0 {
        return Err(Error::InvalidDomain(format!("mesh spacing must be positive, got {h}")));
    }
    let dim = domain.dim();
    let axis = |a: f64, b: f64| {
        let nodes = ((b - a) / h).ceil().max(1.0) as usize;
        composite_gauss(a, b, nodes.div_ceil(order), order)
    };
    match domain.shape() {
        Shape::Box { lo, hi } => Ok(tensor_box(dim, [axis(lo[0], hi[0]), axis(lo[1], hi[1])])),
        Shape::Ball { center, radius } => {
            let radial = axis(0.0, *radius);
            let angular = ((2.0 * PI * radius / h).ceil() as usize).max(2 * order);
            Ok(polar_rule(*center, radial, angular + angular % 2))
        }
        Shape::Polygon { .. } => {
            let mut rule = QuadratureRule::default();
            for t in domain.triangles()? {
                let diam = (0..3)
                    .map(|i| {
                        let (p, q) = (t[i], t[(i + 1) % 3]);
                        (p[0] - q[0]).hypot(p[1] - q[1])
                    })
                    .fold(0.0, f64::max);
                let n = ((diam / h).ceil() as usize).max(order / 2).max(2);
                rule.extend(triangle_rule(&t, n));
            }
            Ok(rule)
        }
        Shape::Complement {
            inner,
            bbox_lo,
            bbox_hi,
        } => match inner.shape() {
            Shape::Box { lo, hi } => {
                let mut rule = QuadratureRule::default();
                for (a, b) in box_complement_pieces(*lo, *hi, *bbox_lo, *bbox_hi, dim) {
                    rule.extend(tensor_box(dim, [axis(a[0], b[0]), axis(a[1], b[1])]));
                }
                Ok(rule)
            }
            _ => Err(Error::Unsupported(
                "mesh quadrature of a complement needs a box inner shape".into(),
            )),
        },
    }
}

/// Gauss rule on a boundary patch: nodes strictly inside the parameter
/// interval, weights include the surface-measure density, normals attached.
pub fn surface_quadrature(patch: &BoundaryPatch, level: usize) -> QuadratureRule {
    if patch.is_point() {
        return QuadratureRule {
            nodes: vec![patch.point(0.5)],
            weights: vec![1.0],
            normals: Some(vec![patch.normal(0.5)]),
        };
    }
    let (ts, ws) = gauss_on(gauss_points(level), 0.0, 1.0);
    surface_rule_on(patch, &ts, &ws)
}

pub(crate) fn surface_rule_on(patch: &BoundaryPatch, ts: &[f64], ws: &[f64]) -> QuadratureRule {
    let mut rule = QuadratureRule {
        nodes: Vec::with_capacity(ts.len()),
        weights: Vec::with_capacity(ts.len()),
        normals: Some(Vec::with_capacity(ts.len())),
    };
    for (t, w) in ts.iter().zip(ws) {
        rule.nodes.push(patch.point(*t));
        rule.weights.push(w * patch.jacobian(*t));
        if let Some(n) = rule.normals.as_mut() {
            n.push(patch.normal(*t));
        }
    }
    rule
}
