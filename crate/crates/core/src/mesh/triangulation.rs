use super::{cross, dist, sub, Point, Polygon};

/// Triangle mesh of a convex polygon.
///
/// Vertices are kept in lexicographic `(x, y)` order and every triangle is
/// counterclockwise. Construction goes through [`Triangulation::from_parts`],
/// which canonicalizes the numbering; the mesh is immutable afterwards.
#[derive(Clone, Debug, PartialEq)]
pub struct Triangulation {
    domain: Polygon,
    points: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<bool>,
}

impl Triangulation {
    /// Builds a canonical triangulation: vertices sorted lexicographically,
    /// triangles oriented counterclockwise and sorted, boundary flags taken
    /// from the polygon.
    pub fn from_parts(domain: Polygon, points: Vec<Point>, triangles: Vec<[usize; 3]>) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| {
            points[a][0]
                .total_cmp(&points[b][0])
                .then(points[a][1].total_cmp(&points[b][1]))
        });
        let mut new_index = vec![0usize; points.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let points: Vec<Point> = order.iter().map(|&i| points[i]).collect();
        let mut triangles: Vec<[usize; 3]> = triangles
            .into_iter()
            .map(|t| {
                let mut t = [new_index[t[0]], new_index[t[1]], new_index[t[2]]];
                if cross(sub(points[t[1]], points[t[0]]), sub(points[t[2]], points[t[0]])) < 0.0 {
                    t.swap(1, 2);
                }
                // rotate so the smallest index comes first (keeps orientation)
                let k = (0..3).min_by_key(|&k| t[k]).unwrap();
                t.rotate_left(k);
                t
            })
            .collect();
        triangles.sort_unstable();
        let boundary = points.iter().map(|&p| domain.on_boundary(p)).collect();
        Triangulation {
            domain,
            points,
            triangles,
            boundary,
        }
    }

    /// Same as [`Triangulation::from_parts`] but keeps the given numbering and
    /// triangles untouched. Used to construct deliberately broken meshes.
    pub fn from_raw(domain: Polygon, points: Vec<Point>, triangles: Vec<[usize; 3]>) -> Self {
        let boundary = points.iter().map(|&p| domain.on_boundary(p)).collect();
        Triangulation {
            domain,
            points,
            triangles,
            boundary,
        }
    }

    pub fn domain(&self) -> &Polygon {
        &self.domain
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn num_vertices(&self) -> usize {
        self.points.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary[v]
    }

    pub fn boundary_flags(&self) -> &[bool] {
        &self.boundary
    }

    pub fn boundary_vertices(&self) -> Vec<usize> {
        (0..self.points.len()).filter(|&v| self.boundary[v]).collect()
    }

    pub fn interior_vertices(&self) -> Vec<usize> {
        (0..self.points.len()).filter(|&v| !self.boundary[v]).collect()
    }

    pub fn corners(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.points[a], self.points[b], self.points[c]]
    }

    /// Unsigned area of triangle `t`.
    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        0.5 * cross(sub(b, a), sub(c, a)).abs()
    }

    /// Diameter `h_T` (longest side).
    pub fn diameter(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        dist(a, b).max(dist(b, c)).max(dist(c, a))
    }

    /// Inner diameter `ρ_T` (twice the inradius).
    pub fn inner_diameter(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        let perimeter = dist(a, b) + dist(b, c) + dist(c, a);
        4.0 * self.area(t) / perimeter
    }

    pub fn barycenter(&self, t: usize) -> Point {
        let [a, b, c] = self.corners(t);
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    /// Mesh size `h = max_T h_T`.
    pub fn mesh_size(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| self.diameter(t))
            .fold(0.0, f64::max)
    }

    /// Shape regularity `σ = max_T h_T / ρ_T`.
    pub fn regularity(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| self.diameter(t) / self.inner_diameter(t))
            .fold(0.0, f64::max)
    }

    pub fn total_area(&self) -> f64 {
        let areas: Vec<f64> = (0..self.triangles.len()).map(|t| self.area(t)).collect();
        crate::exec::pairwise_sum(&areas)
    }

    /// Constant gradients of the three barycentric (hat) functions on `t`.
    pub fn hat_gradients(&self, t: usize) -> [[f64; 2]; 3] {
        let [a, b, c] = self.corners(t);
        let twice_area = cross(sub(b, a), sub(c, a));
        // ∇λ_i = rot(opposite edge) / (2|T|) for counterclockwise corners
        let g = |p: Point, q: Point| [(p[1] - q[1]) / twice_area, (q[0] - p[0]) / twice_area];
        [g(b, c), g(c, a), g(a, b)]
    }

    /// Unique undirected edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|t| {
                [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]
                    .map(|(a, b)| (a.min(b), a.max(b)))
            })
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }
}
