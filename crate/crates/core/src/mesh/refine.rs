use super::Triangulation;
use std::collections::HashMap;

/// Red refinement: every triangle is split into four similar children
/// through its edge midpoints.
pub fn refine_red(tri: &Triangulation) -> Triangulation {
    let mut points = tri.points().to_vec();
    let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
    let mut mid = |a: usize, b: usize, points: &mut Vec<[f64; 2]>| -> usize {
        let key = (a.min(b), a.max(b));
        *midpoint.entry(key).or_insert_with(|| {
            let (p, q) = (points[key.0], points[key.1]);
            points.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
            points.len() - 1
        })
    };
    let mut triangles = Vec::with_capacity(4 * tri.num_triangles());
    for &[a, b, c] in tri.triangles() {
        let ab = mid(a, b, &mut points);
        let bc = mid(b, c, &mut points);
        let ca = mid(c, a, &mut points);
        triangles.push([a, ab, ca]);
        triangles.push([ab, b, bc]);
        triangles.push([ca, bc, c]);
        triangles.push([ab, bc, ca]);
    }
    Triangulation::from_parts(tri.domain().clone(), points, triangles)
}

pub fn refine_red_times(tri: &Triangulation, times: usize) -> Triangulation {
    let mut t = tri.clone();
    for _ in 0..times {
        t = refine_red(&t);
    }
    t
}
