//! Bounded piecewise-smooth domains in one and two dimensions.
//!
//! Domains come from a closed catalogue (interval, box, disk, simple polygon,
//! complement of one of those inside a bounding box). Every member has an
//! exact volume, an exact boundary parameterization and exact outward
//! normals. Points are stored as `[f64; 2]`; in one dimension only the first
//! coordinate is used and the second is ignored.

mod boundary;
pub mod gauss;
pub(crate) mod polygon;
mod quadrature;

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub use boundary::{BoundaryPatch, PatchGeometry, Smoothness};
pub(crate) use quadrature::surface_rule_on;
pub use quadrature::{
    gauss_points, mesh_quadrature, surface_quadrature, volume_quadrature, QuadratureRule,
};

/// A point of R^d, d ∈ {1, 2}.
pub type Point = [f64; 2];

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    /// Axis-aligned box; an interval when `dim == 1`.
    Box { lo: Point, hi: Point },
    /// Disk (d = 2).
    Ball { center: Point, radius: f64 },
    /// Simple polygon, counterclockwise.
    Polygon { vertices: Vec<Point> },
    /// `bbox \ inner`; stands in for the unbounded complement `R^d \ inner`.
    Complement {
        inner: Box<Domain>,
        bbox_lo: Point,
        bbox_hi: Point,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    shape: Shape,
    dim: usize,
}

/// Local graph data of the boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct LipschitzData {
    /// Largest local graph slope over the charts of the smooth boundary pieces.
    pub m: f64,
    /// The singular set: corner points of the boundary.
    pub singular_points: Vec<Point>,
}

impl Domain {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidDomain(format!("interval needs a < b, got ({a}, {b})")));
        }
        Ok(Domain {
            shape: Shape::Box {
                lo: [a, 0.0],
                hi: [b, 0.0],
            },
            dim: 1,
        })
    }

    pub fn rect(lo: Point, hi: Point) -> Result<Self> {
        if !(lo[0] < hi[0] && lo[1] < hi[1]) || lo.iter().chain(&hi).any(|v| !v.is_finite()) {
            return Err(Error::InvalidDomain(format!(
                "box needs lo < hi componentwise, got {lo:?} {hi:?}"
            )));
        }
        Ok(Domain {
            shape: Shape::Box { lo, hi },
            dim: 2,
        })
    }

    pub fn disk(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || center.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDomain(format!("ball radius must be > 0, got {radius}")));
        }
        Ok(Domain {
            shape: Shape::Ball { center, radius },
            dim: 2,
        })
    }

    pub fn polygon(vertices: Vec<Point>) -> Result<Self> {
        polygon::validate(&vertices)?;
        Ok(Domain {
            shape: Shape::Polygon { vertices },
            dim: 2,
        })
    }

    /// Complement of `inner` truncated to the box `[bbox_lo, bbox_hi]`; the box
    /// must strictly contain `inner`.
    pub fn complement(inner: Domain, bbox_lo: Point, bbox_hi: Point) -> Result<Self> {
        let dim = inner.dim;
        if matches!(inner.shape, Shape::Complement { .. }) {
            return Err(Error::InvalidDomain("nested complements are not supported".into()));
        }
        let (ilo, ihi) = inner.bbox();
        for j in 0..dim {
            if !(bbox_lo[j] < ilo[j] && ihi[j] < bbox_hi[j]) {
                return Err(Error::InvalidDomain(
                    "complement bounding box must strictly contain the inner shape".into(),
                ));
            }
        }
        Ok(Domain {
            shape: Shape::Complement {
                inner: Box::new(inner),
                bbox_lo,
                bbox_hi,
            },
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn is_complement(&self) -> bool {
        matches!(self.shape, Shape::Complement { .. })
    }

    /// Inner shape of a complement domain.
    pub fn complement_inner(&self) -> Option<&Domain> {
        match &self.shape {
            Shape::Complement { inner, .. } => Some(inner),
            _ => None,
        }
    }

    /// Membership in the open region. Boundary points may go either way.
    pub fn contains(&self, x: Point) -> bool {
        match &self.shape {
            Shape::Box { lo, hi } => (0..self.dim).all(|j| lo[j] < x[j] && x[j] < hi[j]),
            Shape::Ball { center, radius } => {
                let dx = x[0] - center[0];
                let dy = x[1] - center[1];
                dx * dx + dy * dy < radius * radius
            }
            Shape::Polygon { vertices } => polygon::contains(vertices, x),
            Shape::Complement {
                inner,
                bbox_lo,
                bbox_hi,
            } => {
                (0..self.dim).all(|j| bbox_lo[j] < x[j] && x[j] < bbox_hi[j]) && !inner.contains(x)
            }
        }
    }

    /// Lebesgue measure; complements are measured inside their bounding box.
    pub fn volume(&self) -> f64 {
        match &self.shape {
            Shape::Box { lo, hi } => (0..self.dim).map(|j| hi[j] - lo[j]).product(),
            Shape::Ball { radius, .. } => PI * radius * radius,
            Shape::Polygon { vertices } => polygon::signed_area(vertices),
            Shape::Complement {
                inner,
                bbox_lo,
                bbox_hi,
            } => {
                let b: f64 = (0..self.dim).map(|j| bbox_hi[j] - bbox_lo[j]).product();
                b - inner.volume()
            }
        }
    }

    /// Axis-aligned bounding box.
    pub fn bbox(&self) -> (Point, Point) {
        match &self.shape {
            Shape::Box { lo, hi } => (*lo, *hi),
            Shape::Ball { center, radius } => (
                [center[0] - radius, center[1] - radius],
                [center[0] + radius, center[1] + radius],
            ),
            Shape::Polygon { vertices } => {
                let mut lo = [f64::INFINITY; 2];
                let mut hi = [f64::NEG_INFINITY; 2];
                for v in vertices {
                    for j in 0..2 {
                        lo[j] = lo[j].min(v[j]);
                        hi[j] = hi[j].max(v[j]);
                    }
                }
                (lo, hi)
            }
            Shape::Complement {
                bbox_lo, bbox_hi, ..
            } => (*bbox_lo, *bbox_hi),
        }
    }

    /// Euclidean diameter (of the bounding box for complements).
    pub fn diam(&self) -> f64 {
        match &self.shape {
            Shape::Ball { radius, .. } => 2.0 * radius,
            Shape::Polygon { vertices } => {
                let mut d: f64 = 0.0;
                for a in vertices {
                    for b in vertices {
                        d = d.max(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt());
                    }
                }
                d
            }
            _ => {
                let (lo, hi) = self.bbox();
                (0..self.dim)
                    .map(|j| (hi[j] - lo[j]).powi(2))
                    .sum::<f64>()
                    .sqrt()
            }
        }
    }

    /// sup of |ξ|_∞ over the closure of the domain.
    pub fn sup_norm_radius(&self) -> f64 {
        let (lo, hi) = self.bbox();
        (0..self.dim)
            .map(|j| lo[j].abs().max(hi[j].abs()))
            .fold(0.0, f64::max)
    }

    /// Patch decomposition of the boundary. Complements carry the inner
    /// boundary with reversed normals; the truncation box is not part of it.
    pub fn boundary_patches(&self) -> Vec<BoundaryPatch> {
        boundary::patches(self)
    }

    /// Corner list of the boundary.
    pub fn singular_points(&self) -> Vec<Point> {
        match &self.shape {
            Shape::Box { lo, hi } if self.dim == 2 => vec![
                [lo[0], lo[1]],
                [hi[0], lo[1]],
                [hi[0], hi[1]],
                [lo[0], hi[1]],
            ],
            Shape::Polygon { vertices } => vertices.clone(),
            Shape::Complement { inner, .. } => inner.singular_points(),
            _ => Vec::new(),
        }
    }

    pub fn lipschitz_data(&self) -> LipschitzData {
        let m = match &self.shape {
            Shape::Box { .. } | Shape::Polygon { .. } => 0.0,
            // four charts over quarter arcs centered on the axes: slope tan(π/4)
            Shape::Ball { .. } => (PI / 4.0).tan(),
            Shape::Complement { inner, .. } => inner.lipschitz_data().m,
        };
        LipschitzData {
            m,
            singular_points: self.singular_points(),
        }
    }

    /// Total (d−1)-measure of the boundary; point count in one dimension.
    pub fn boundary_measure(&self) -> f64 {
        self.boundary_patches().iter().map(|p| p.measure()).sum()
    }

    /// Triangles of a polygon, for quadrature and Fourier integrals.
    pub(crate) fn triangles(&self) -> Result<Vec<[Point; 3]>> {
        match &self.shape {
            Shape::Polygon { vertices } => polygon::triangulate(vertices),
            _ => Err(Error::Unsupported("triangulation of a non-polygon".into())),
        }
    }
}
