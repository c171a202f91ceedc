use super::{refine_red, Polygon, Triangulation};
use crate::{Error, Result};

/// Triangulates a convex polygon.
///
/// Axis-aligned rectangles get the structured "union jack" mesh: cells of
/// spacing at most `h_target` per direction, each split along the diagonal
/// that alternates with the parity of the cell, so that every even vertex is
/// the centre of a symmetric eight-triangle star. Other convex polygons are
/// fanned from the vertex centroid and red-refined until `h ≤ h_target`.
pub fn triangulate(polygon: &Polygon, h_target: f64) -> Result<Triangulation> {
    if !(h_target > 0.0) || !h_target.is_finite() {
        return Err(Error::InvalidArgument(format!("h_target = {h_target} must be positive")));
    }
    if h_target >= polygon.diameter() {
        return Err(Error::InvalidArgument(format!(
            "h_target = {h_target} is not smaller than the polygon diameter {}",
            polygon.diameter()
        )));
    }
    if let Some((x0, y0, x1, y1)) = polygon.as_rectangle() {
        let nx = ((x1 - x0) / h_target - 1e-9).ceil().max(1.0) as usize;
        let ny = ((y1 - y0) / h_target - 1e-9).ceil().max(1.0) as usize;
        return Ok(structured_rectangle(polygon, nx, ny));
    }
    let verts = polygon.vertices();
    let n = verts.len();
    let cx = verts.iter().map(|p| p[0]).sum::<f64>() / n as f64;
    let cy = verts.iter().map(|p| p[1]).sum::<f64>() / n as f64;
    let mut points = verts.to_vec();
    points.push([cx, cy]);
    let triangles = (0..n).map(|i| [n, i, (i + 1) % n]).collect();
    let mut tri = Triangulation::from_parts(polygon.clone(), points, triangles);
    while tri.mesh_size() > h_target {
        tri = refine_red(&tri);
    }
    Ok(tri)
}

/// Union-jack mesh of an axis-aligned rectangle with `nx × ny` cells.
pub fn structured_rectangle(polygon: &Polygon, nx: usize, ny: usize) -> Triangulation {
    let (x0, y0, x1, y1) = polygon
        .as_rectangle()
        .expect("structured meshes need an axis-aligned rectangle");
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut points = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            let x = if i == nx { x1 } else { x0 + (x1 - x0) * i as f64 / nx as f64 };
            let y = if j == ny { y1 } else { y0 + (y1 - y0) * j as f64 / ny as f64 };
            points.push([x, y]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if (i + j) % 2 == 0 {
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            } else {
                triangles.push([a, b, d]);
                triangles.push([b, c, d]);
            }
        }
    }
    Triangulation::from_parts(polygon.clone(), points, triangles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    const SIGMA_RIGHT_ISOSCELES: f64 = 1.0 + SQRT_2;

    #[test]
    fn unit_square_half() {
        let tri = triangulate(&Polygon::unit_square(), 0.5).unwrap();
        assert_eq!(tri.num_triangles(), 8);
        assert_eq!(tri.num_vertices(), 9);
        assert!((tri.mesh_size() - SQRT_2 / 2.0).abs() < 1e-15);
        assert!((tri.regularity() - SIGMA_RIGHT_ISOSCELES).abs() < 1e-12);
        let areas: Vec<f64> = (0..8).map(|t| tri.area(t)).collect();
        assert!(areas.iter().all(|&a| (a - 0.125).abs() < 1e-15));
    }

    #[test]
    fn unit_square_quarter() {
        let tri = triangulate(&Polygon::unit_square(), 0.25).unwrap();
        assert_eq!(tri.num_triangles(), 32);
        assert!((tri.regularity() - SIGMA_RIGHT_ISOSCELES).abs() < 1e-12);
    }

    #[test]
    fn symmetric_square_contains_origin() {
        let tri = triangulate(&Polygon::symmetric_square(), 0.5).unwrap();
        assert_eq!(tri.num_triangles(), 32);
        let origin = tri.points().iter().position(|p| *p == [0.0, 0.0]);
        assert!(origin.is_some());
        assert!(!tri.is_boundary(origin.unwrap()));
    }

    #[test]
    fn generic_polygon_is_fanned_and_refined() {
        let hex: Vec<[f64; 2]> = (0..6)
            .map(|k| {
                let a = k as f64 * std::f64::consts::TAU / 6.0;
                [a.cos(), a.sin()]
            })
            .collect();
        let poly = Polygon::new(hex).unwrap();
        let tri = triangulate(&poly, 0.3).unwrap();
        assert!(tri.mesh_size() <= 0.3);
        assert!((tri.total_area() - poly.area()).abs() <= 1e-12 * poly.area());
        assert!((tri.regularity() - 3f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_targets() {
        let sq = Polygon::unit_square();
        assert!(triangulate(&sq, 0.0).is_err());
        assert!(triangulate(&sq, 2.0).is_err());
    }
}
