use super::{cross, dist, sub, Point};
use crate::{Error, Result};

/// Convex polygon with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Validates that the vertex list describes a simple, strictly convex,
    /// counterclockwise polygon.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidPolygon(format!("{n} vertices, need at least 3")));
        }
        if vertices.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(Error::InvalidPolygon("non-finite coordinate".into()));
        }
        let scale = diameter_of(&vertices);
        if scale == 0.0 {
            return Err(Error::InvalidPolygon("all vertices coincide".into()));
        }
        let mut turning = 0.0;
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            let e1 = sub(b, a);
            let e2 = sub(c, b);
            if dist(a, b) <= 1e-12 * scale {
                return Err(Error::InvalidPolygon(format!("repeated vertex at index {}", (i + 1) % n)));
            }
            let z = cross(e1, e2);
            if z <= 1e-14 * scale * scale {
                let what = if z.abs() <= 1e-14 * scale * scale {
                    "collinear (degenerate) corner"
                } else {
                    "reflex corner or clockwise orientation"
                };
                return Err(Error::InvalidPolygon(format!(
                    "{what} at vertex {}",
                    (i + 1) % n
                )));
            }
            turning += z.atan2(e1[0] * e2[0] + e1[1] * e2[1]);
        }
        if (turning - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(Error::InvalidPolygon(format!(
                "self-intersecting: total turning {turning:.6} rad"
            )));
        }
        Ok(Polygon { vertices })
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        Polygon::new(vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]])
    }

    pub fn unit_square() -> Self {
        Polygon::rectangle(0.0, 0.0, 1.0, 1.0).expect("unit square")
    }

    /// `[-1, 1]²`
    pub fn symmetric_square() -> Self {
        Polygon::rectangle(-1.0, -1.0, 1.0, 1.0).expect("square")
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        0.5 * (0..n)
            .map(|i| cross(self.vertices[i], self.vertices[(i + 1) % n]))
            .sum::<f64>()
    }

    pub fn diameter(&self) -> f64 {
        diameter_of(&self.vertices)
    }

    /// `Some((x0, y0, x1, y1))` when the polygon is an axis-aligned rectangle.
    pub fn as_rectangle(&self) -> Option<(f64, f64, f64, f64)> {
        if self.vertices.len() != 4 {
            return None;
        }
        let xs: Vec<f64> = self.vertices.iter().map(|p| p[0]).collect();
        let ys: Vec<f64> = self.vertices.iter().map(|p| p[1]).collect();
        let (x0, x1) = (xs.iter().copied().fold(f64::INFINITY, f64::min), xs.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        let (y0, y1) = (ys.iter().copied().fold(f64::INFINITY, f64::min), ys.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        let corner = |p: &Point| (p[0] == x0 || p[0] == x1) && (p[1] == y0 || p[1] == y1);
        if self.vertices.iter().all(corner) {
            Some((x0, y0, x1, y1))
        } else {
            None
        }
    }

    /// Snapping tolerance used for all point-identity decisions.
    pub fn tolerance(&self) -> f64 {
        1e-12 * self.diameter()
    }

    /// Whether `p` lies on the boundary (within [`Polygon::tolerance`]).
    pub fn on_boundary(&self, p: Point) -> bool {
        self.boundary_side(p).is_some()
    }

    /// Index of a polygon side containing `p`, if any.
    pub fn boundary_side(&self, p: Point) -> Option<usize> {
        let tol = self.tolerance();
        let n = self.vertices.len();
        (0..n).find(|&i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            point_segment_distance(p, a, b) <= tol
        })
    }

    pub fn contains(&self, p: Point) -> bool {
        let tol = self.tolerance() * self.diameter();
        let n = self.vertices.len();
        (0..n).all(|i| cross(sub(self.vertices[(i + 1) % n], self.vertices[i]), sub(p, self.vertices[i])) >= -tol)
    }
}

pub(crate) fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = sub(b, a);
    let ap = sub(p, a);
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > 0.0 {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    dist(p, [a[0] + t * ab[0], a[1] + t * ab[1]])
}

fn diameter_of(points: &[Point]) -> f64 {
    let mut d = 0.0f64;
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            d = d.max(dist(a, b));
        }
    }
    d
}
