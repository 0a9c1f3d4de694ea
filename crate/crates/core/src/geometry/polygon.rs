//! Simple-polygon helpers: orientation, simplicity, point location, ear clipping.

use super::Point;
use crate::error::{Error, Result};

pub(crate) fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        s += a[0] * b[1] - b[0] * a[1];
    }
    0.5 * s
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: Point, b: Point, p: Point, d: f64| {
        d == 0.0
            && p[0] >= a[0].min(b[0])
            && p[0] <= a[0].max(b[0])
            && p[1] >= a[1].min(b[1])
            && p[1] <= a[1].max(b[1])
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

/// Checks vertex count, counterclockwise orientation and simplicity.
pub(crate) fn validate(v: &[Point]) -> Result<()> {
    let n = v.len();
    if n < 3 {
        return Err(Error::InvalidDomain(format!(
            "polygon needs at least 3 vertices, got {n}"
        )));
    }
    if v.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
        return Err(Error::InvalidDomain("polygon vertex is not finite".into()));
    }
    let area = signed_area(v);
    if area <= 0.0 {
        return Err(Error::InvalidDomain(
            "polygon must be counterclockwise with positive area".into(),
        ));
    }
    for i in 0..n {
        let a1 = v[i];
        let a2 = v[(i + 1) % n];
        if a1 == a2 {
            return Err(Error::InvalidDomain(format!("repeated vertex at index {i}")));
        }
        for j in (i + 1)..n {
            // adjacent edges share a vertex
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let b1 = v[j];
            let b2 = v[(j + 1) % n];
            if segments_intersect(a1, a2, b1, b2) {
                return Err(Error::InvalidDomain(format!(
                    "polygon edges {i} and {j} intersect"
                )));
            }
        }
    }
    Ok(())
}

/// Even-odd crossing test; boundary points may land on either side.
pub(crate) fn contains(v: &[Point], x: Point) -> bool {
    let n = v.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (pi, pj) = (v[i], v[j]);
        if (pi[1] > x[1]) != (pj[1] > x[1]) {
            let xc = pj[0] + (x[1] - pj[1]) * (pi[0] - pj[0]) / (pi[1] - pj[1]);
            if x[0] < xc {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn point_in_triangle(p: Point, a: Point, b: Point, c: Point) -> bool {
    cross(a, b, p) >= 0.0 && cross(b, c, p) >= 0.0 && cross(c, a, p) >= 0.0
}

/// Ear-clipping triangulation of a counterclockwise simple polygon.
pub(crate) fn triangulate(v: &[Point]) -> Result<Vec<[Point; 3]>> {
    validate(v)?;
    let mut idx: Vec<usize> = (0..v.len()).collect();
    let mut tris = Vec::with_capacity(v.len() - 2);
    let mut guard = 0usize;
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for k in 0..m {
            let ia = idx[(k + m - 1) % m];
            let ib = idx[k];
            let ic = idx[(k + 1) % m];
            let (a, b, c) = (v[ia], v[ib], v[ic]);
            if cross(a, b, c) <= 0.0 {
                continue; // reflex or degenerate
            }
            let blocked = idx.iter().any(|&j| {
                j != ia && j != ib && j != ic && point_in_triangle(v[j], a, b, c)
            });
            if blocked {
                continue;
            }
            tris.push([a, b, c]);
            idx.remove(k);
            clipped = true;
            break;
        }
        guard += 1;
        if !clipped || guard > 4 * v.len() {
            return Err(Error::Triangulation("no ear found".into()));
        }
    }
    let (a, b, c) = (v[idx[0]], v[idx[1]], v[idx[2]]);
    if cross(a, b, c) <= 0.0 {
        return Err(Error::Triangulation("degenerate final triangle".into()));
    }
    tris.push([a, b, c]);
    Ok(tris)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l_shape() -> Vec<Point> {
        vec![
            [0.0, 0.0],
            [1.0, 0.0],
            [1.0, 0.5],
            [0.5, 0.5],
            [0.5, 1.0],
            [0.0, 1.0],
        ]
    }

    #[test]
    fn l_shape_area_and_triangles() {
        let v = l_shape();
        assert!((signed_area(&v) - 0.75).abs() < 1e-15);
        let t = triangulate(&v).unwrap();
        assert_eq!(t.len(), 4);
        let a: f64 = t.iter().map(|t| 0.5 * cross(t[0], t[1], t[2])).sum();
        assert!((a - 0.75).abs() < 1e-14);
    }

    #[test]
    fn rejects_clockwise_and_bowtie() {
        let mut v = l_shape();
        v.reverse();
        assert!(validate(&v).is_err());
        let bowtie = vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert!(validate(&bowtie).is_err());
        assert!(validate(&[[0.0, 0.0], [1.0, 0.0]]).is_err());
    }

    #[test]
    fn point_location() {
        let v = l_shape();
        assert!(contains(&v, [0.25, 0.25]));
        assert!(contains(&v, [0.25, 0.75]));
        assert!(!contains(&v, [0.75, 0.75]));
        assert!(!contains(&v, [2.0, 0.1]));
    }
}
