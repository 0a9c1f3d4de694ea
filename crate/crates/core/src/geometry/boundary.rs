use std::f64::consts::PI;

use super::{Domain, Point, Shape};

/// Regularity of a boundary patch on its open parameter set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothness {
    Finite(u32),
    Infinite,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PatchGeometry {
    /// Boundary point of a one-dimensional domain; `normal` is ±1.
    Point { x: f64, normal: f64 },
    /// Straight edge from `a` to `b`; the outward normal lies to the right
    /// of the travel direction.
    Segment { a: Point, b: Point },
    /// Circular arc, angle `theta0 + t (theta1 - theta0)`; normal radial,
    /// pointing away from the center when `outward`.
    Arc {
        center: Point,
        radius: f64,
        theta0: f64,
        theta1: f64,
        outward: bool,
    },
}

/// One smooth piece of a domain boundary, parameterized over `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPatch {
    pub geometry: PatchGeometry,
    pub smoothness: Smoothness,
    /// Parameter values abutting the singular set.
    pub singular_endpoints: Vec<f64>,
}

impl BoundaryPatch {
    pub fn point(&self, t: f64) -> Point {
        match &self.geometry {
            PatchGeometry::Point { x, .. } => [*x, 0.0],
            PatchGeometry::Segment { a, b } => {
                [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
            }
            PatchGeometry::Arc {
                center,
                radius,
                theta0,
                theta1,
                ..
            } => {
                let th = theta0 + t * (theta1 - theta0);
                [center[0] + radius * th.cos(), center[1] + radius * th.sin()]
            }
        }
    }

    /// Unit outward normal.
    pub fn normal(&self, t: f64) -> Point {
        match &self.geometry {
            PatchGeometry::Point { normal, .. } => [*normal, 0.0],
            PatchGeometry::Segment { a, b } => {
                let dx = b[0] - a[0];
                let dy = b[1] - a[1];
                let len = dx.hypot(dy);
                [dy / len, -dx / len]
            }
            PatchGeometry::Arc {
                theta0,
                theta1,
                outward,
                ..
            } => {
                let th = theta0 + t * (theta1 - theta0);
                let s = if *outward { 1.0 } else { -1.0 };
                [s * th.cos(), s * th.sin()]
            }
        }
    }

    /// Surface-measure density dS/dt (counting measure for points).
    pub fn jacobian(&self, _t: f64) -> f64 {
        match &self.geometry {
            PatchGeometry::Point { .. } => 1.0,
            PatchGeometry::Segment { a, b } => (b[0] - a[0]).hypot(b[1] - a[1]),
            PatchGeometry::Arc {
                radius,
                theta0,
                theta1,
                ..
            } => radius * (theta1 - theta0).abs(),
        }
    }

    pub fn measure(&self) -> f64 {
        self.jacobian(0.5)
    }

    pub fn is_point(&self) -> bool {
        matches!(self.geometry, PatchGeometry::Point { .. })
    }

    /// Whether the normal varies along the patch.
    pub fn is_curved(&self) -> bool {
        matches!(self.geometry, PatchGeometry::Arc { .. })
    }

    /// Parameters in (0, 1) where the normal is orthogonal to `dir`, sorted.
    /// These are the kinks of `t ↦ |n(t)·dir|`.
    pub fn orthogonality_params(&self, dir: Point) -> Vec<f64> {
        let PatchGeometry::Arc { theta0, theta1, .. } = self.geometry else {
            return Vec::new();
        };
        if dir[0] == 0.0 && dir[1] == 0.0 {
            return Vec::new();
        }
        let base = dir[1].atan2(dir[0]) + 0.5 * PI;
        let (lo, hi) = (theta0.min(theta1), theta0.max(theta1));
        let mut out = Vec::new();
        let k0 = ((lo - base) / PI).floor() as i64 - 1;
        let k1 = ((hi - base) / PI).ceil() as i64 + 1;
        for k in k0..=k1 {
            let th = base + k as f64 * PI;
            let t = (th - theta0) / (theta1 - theta0);
            if t > 1e-14 && t < 1.0 - 1e-14 {
                out.push(t);
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }
}

fn segment(a: Point, b: Point) -> BoundaryPatch {
    BoundaryPatch {
        geometry: PatchGeometry::Segment { a, b },
        smoothness: Smoothness::Infinite,
        singular_endpoints: vec![0.0, 1.0],
    }
}

fn flip(p: BoundaryPatch) -> BoundaryPatch {
    let geometry = match p.geometry {
        PatchGeometry::Point { x, normal } => PatchGeometry::Point { x, normal: -normal },
        PatchGeometry::Segment { a, b } => PatchGeometry::Segment { a: b, b: a },
        PatchGeometry::Arc {
            center,
            radius,
            theta0,
            theta1,
            outward,
        } => PatchGeometry::Arc {
            center,
            radius,
            theta0,
            theta1,
            outward: !outward,
        },
    };
    let singular_endpoints = match geometry {
        PatchGeometry::Segment { .. } => p.singular_endpoints.iter().map(|t| 1.0 - t).rev().collect(),
        _ => p.singular_endpoints,
    };
    BoundaryPatch {
        geometry,
        smoothness: p.smoothness,
        singular_endpoints,
    }
}

pub(super) fn patches(domain: &Domain) -> Vec<BoundaryPatch> {
    match domain.shape() {
        Shape::Box { lo, hi } if domain.dim() == 1 => vec![
            BoundaryPatch {
                geometry: PatchGeometry::Point {
                    x: lo[0],
                    normal: -1.0,
                },
                smoothness: Smoothness::Infinite,
                singular_endpoints: Vec::new(),
            },
            BoundaryPatch {
                geometry: PatchGeometry::Point {
                    x: hi[0],
                    normal: 1.0,
                },
                smoothness: Smoothness::Infinite,
                singular_endpoints: Vec::new(),
            },
        ],
        Shape::Box { lo, hi } => {
            let c = [
                [lo[0], lo[1]],
                [hi[0], lo[1]],
                [hi[0], hi[1]],
                [lo[0], hi[1]],
            ];
            (0..4).map(|i| segment(c[i], c[(i + 1) % 4])).collect()
        }
        Shape::Ball { center, radius } => vec![BoundaryPatch {
            geometry: PatchGeometry::Arc {
                center: *center,
                radius: *radius,
                theta0: 0.0,
                theta1: 2.0 * PI,
                outward: true,
            },
            smoothness: Smoothness::Infinite,
            singular_endpoints: Vec::new(),
        }],
        Shape::Polygon { vertices } => {
            let n = vertices.len();
            (0..n)
                .map(|i| segment(vertices[i], vertices[(i + 1) % n]))
                .collect()
        }
        Shape::Complement { inner, .. } => inner.boundary_patches().into_iter().map(flip).collect(),
    }
}
