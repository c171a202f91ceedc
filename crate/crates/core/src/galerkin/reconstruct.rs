use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exec::{max_of, pairwise_sum};
use crate::mesh::{Point, Triangulation};
use crate::spaces::VertexFunction;
use crate::{Error, Exec, Result};

/// Degree-4 six-point rule: (barycentric a, weight) for orbits (a, a, 1−2a).
const QUAD4: [(f64, f64); 2] = [
    (0.445_948_490_915_965, 0.223_381_589_678_011),
    (0.091_576_213_509_771, 0.109_951_743_655_322),
];

/// Quadrature value with an estimate of its own error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureValue {
    pub value: f64,
    pub error: f64,
}

/// Hölder norm of a piecewise linear function sampled on a point set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct P1Holder {
    pub eta: f64,
    pub seminorm: f64,
    /// `sup |u| + seminorm`
    pub norm: f64,
    pub points: usize,
}

/// Continuous piecewise linear function `Σ u(x) φ_x` on a triangulation.
#[derive(Clone, Debug)]
pub struct P1Field<'a> {
    tri: &'a Triangulation,
    values: Vec<f64>,
}

/// `R_h ũ = Σ_{x interior} ũ(x) φ_x`; `ũ` must vanish on the boundary.
pub fn reconstruct<'a>(tri: &'a Triangulation, u: &VertexFunction<f64>) -> Result<P1Field<'a>> {
    if let Some(v) = tri.boundary_vertices().into_iter().find(|&v| u.get(v) != 0.0) {
        return Err(Error::InvalidArgument(format!("reconstruction needs zero boundary values, vertex {v}")));
    }
    P1Field::interpolate(tri, u.values().to_vec())
}

impl<'a> P1Field<'a> {
    /// Interpolant of arbitrary nodal values.
    pub fn interpolate(tri: &'a Triangulation, values: Vec<f64>) -> Result<Self> {
        if values.len() != tri.num_vertices() {
            return Err(Error::DimensionMismatch {
                expected: tri.num_vertices(),
                got: values.len(),
            });
        }
        Ok(P1Field { tri, values })
    }

    pub fn triangulation(&self) -> &Triangulation {
        self.tri
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Constant gradient on triangle `t`.
    pub fn gradient(&self, t: usize) -> [f64; 2] {
        let g = self.tri.hat_gradients(t);
        let v = self.tri.triangles()[t];
        let mut out = [0.0; 2];
        for i in 0..3 {
            out[0] += self.values[v[i]] * g[i][0];
            out[1] += self.values[v[i]] * g[i][1];
        }
        out
    }

    fn at_barycentric(&self, t: usize, l: [f64; 3]) -> f64 {
        let v = self.tri.triangles()[t];
        l[0] * self.values[v[0]] + l[1] * self.values[v[1]] + l[2] * self.values[v[2]]
    }

    /// Value at an arbitrary point of the domain.
    pub fn evaluate(&self, locator: &PointLocator, p: Point) -> Option<f64> {
        let (t, l) = locator.locate(self.tri, p)?;
        Some(self.at_barycentric(t, l))
    }

    /// `‖∇R‖_{L^p(Ω)}`, exact: `Σ_T |T| |∇R|_T|^p`.
    pub fn grad_lp_norm(&self, p: f64) -> f64 {
        let nt = self.tri.num_triangles();
        let mags: Vec<f64> = (0..nt)
            .map(|t| {
                let g = self.gradient(t);
                g[0].hypot(g[1])
            })
            .collect();
        if p.is_infinite() {
            return max_of(&mags);
        }
        let terms: Vec<f64> = (0..nt).map(|t| self.tri.area(t) * mags[t].powf(p)).collect();
        pairwise_sum(&terms).powf(1.0 / p)
    }

    fn power_integral(&self, t: usize, p: f64, corners: [[f64; 3]; 3]) -> f64 {
        // corners: barycentric coordinates (w.r.t. t) of a sub-triangle
        let mut s = 0.0;
        for &(a, w) in &QUAD4 {
            let b = 1.0 - 2.0 * a;
            for l in [[a, a, b], [a, b, a], [b, a, a]] {
                let mut bary = [0.0; 3];
                for k in 0..3 {
                    bary[k] = l[0] * corners[0][k] + l[1] * corners[1][k] + l[2] * corners[2][k];
                }
                s += w * self.at_barycentric(t, bary).abs().powf(p);
            }
        }
        s
    }

    /// `‖R‖_{L^p(Ω)}` by the degree-4 rule on each triangle split into four;
    /// the error estimate compares with the unsplit rule (zero up to
    /// round-off for even integer `p`).
    pub fn lp_norm(&self, p: f64) -> QuadratureValue {
        if p.is_infinite() {
            let v = self.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            return QuadratureValue { value: v, error: 0.0 };
        }
        let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let h = 0.5;
        let m01 = [h, h, 0.0];
        let m12 = [0.0, h, h];
        let m20 = [h, 0.0, h];
        let subs = [
            [id[0], m01, m20],
            [m01, id[1], m12],
            [m20, m12, id[2]],
            [m01, m12, m20],
        ];
        let nt = self.tri.num_triangles();
        let mut coarse = Vec::with_capacity(nt);
        let mut fine = Vec::with_capacity(nt);
        for t in 0..nt {
            let area = self.tri.area(t);
            coarse.push(area * self.power_integral(t, p, id));
            fine.push(area * 0.25 * subs.iter().map(|s| self.power_integral(t, p, *s)).sum::<f64>());
        }
        let (c, f) = (pairwise_sum(&coarse), pairwise_sum(&fine));
        let value = f.powf(1.0 / p);
        let error = if value > 0.0 {
            (c - f).abs() / (p * value.powf(p - 1.0))
        } else {
            0.0
        };
        QuadratureValue { value, error }
    }

    /// `‖R‖_{L^p} + ‖∇R‖_{L^p}`
    pub fn w1p_norm(&self, p: f64) -> f64 {
        self.lp_norm(p).value + self.grad_lp_norm(p)
    }

    /// Hölder norm over the mesh vertices and edge midpoints, with Euclidean
    /// distances.
    pub fn holder(&self, eta: f64, exec: Exec) -> Result<P1Holder> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::InvalidArgument(format!("Hölder exponent η = {eta} must lie in (0, 1]")));
        }
        let mut pts: Vec<Point> = self.tri.points().to_vec();
        let mut vals = self.values.clone();
        for (a, b) in self.tri.edges() {
            let (p, q) = (self.tri.points()[a], self.tri.points()[b]);
            pts.push([(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0]);
            vals.push((self.values[a] + self.values[b]) / 2.0);
        }
        let seminorm = holder_on_points(&pts, &vals, eta, exec);
        let sup = vals.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        Ok(P1Holder {
            eta,
            seminorm,
            norm: sup + seminorm,
            points: pts.len(),
        })
    }

    /// Largest Hölder quotient over `samples` random pairs of points drawn
    /// inside triangles (pairs in one triangle and in neighbouring ones).
    pub fn holder_audit(&self, eta: f64, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nt = self.tri.num_triangles();
        let point = |rng: &mut ChaCha8Rng, t: usize| -> (Point, f64) {
            let (mut a, mut b): (f64, f64) = (rng.gen(), rng.gen());
            if a + b > 1.0 {
                a = 1.0 - a;
                b = 1.0 - b;
            }
            let l = [1.0 - a - b, a, b];
            let [p0, p1, p2] = self.tri.corners(t);
            let p = [
                l[0] * p0[0] + l[1] * p1[0] + l[2] * p2[0],
                l[0] * p0[1] + l[1] * p1[1] + l[2] * p2[1],
            ];
            (p, self.at_barycentric(t, l))
        };
        let mut best = 0.0f64;
        for _ in 0..samples {
            let t1 = rng.gen_range(0..nt);
            let t2 = if rng.gen_bool(0.5) { t1 } else { rng.gen_range(0..nt) };
            let (p, u) = point(&mut rng, t1);
            let (q, v) = point(&mut rng, t2);
            let d = (p[0] - q[0]).hypot(p[1] - q[1]);
            if d > 0.0 {
                best = best.max((u - v).abs() / d.powf(eta));
            }
        }
        best
    }
}

/// `sup_{i≠j} |v_i − v_j| / |p_i − p_j|^η` over all pairs, skipping pairs
/// that cannot beat the current maximum (`d^η ≥ min(d, 1)`).
pub fn holder_on_points(pts: &[Point], vals: &[f64], eta: f64, exec: Exec) -> f64 {
    let n = pts.len();
    let chunks = n.clamp(1, 256);
    // a cheap first guess makes the pruning effective from the start
    let mut seed = 0.0f64;
    for i in 1..n.min(2000) {
        let d = (pts[i][0] - pts[i - 1][0]).hypot(pts[i][1] - pts[i - 1][1]);
        if d > 0.0 {
            seed = seed.max((vals[i] - vals[i - 1]).abs() / d.powf(eta));
        }
    }
    let parts = exec.map(chunks, |c| {
        let mut best = seed;
        // interleaved rows balance the triangular loop across chunks
        let mut i = c;
        while i < n {
            let (pi, vi) = (pts[i], vals[i]);
            for j in (i + 1)..n {
                let dv = (vi - vals[j]).abs();
                if dv == 0.0 {
                    continue;
                }
                let d2 = (pi[0] - pts[j][0]).powi(2) + (pi[1] - pts[j][1]).powi(2);
                let lower = d2.min(1.0).sqrt();
                if dv <= best * lower {
                    continue;
                }
                let r = dv / d2.powf(0.5 * eta);
                if r > best {
                    best = r;
                }
            }
            i += chunks;
        }
        best
    });
    max_of(&parts)
}

/// Bucket grid for point location in a triangulation.
#[derive(Clone, Debug)]
pub struct PointLocator {
    origin: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl PointLocator {
    pub fn new(tri: &Triangulation) -> Self {
        let pts = tri.points();
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in pts {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let cell = tri.mesh_size().max(1e-300);
        let nx = (((hi[0] - lo[0]) / cell).ceil() as usize).max(1);
        let ny = (((hi[1] - lo[1]) / cell).ceil() as usize).max(1);
        let mut buckets = vec![Vec::new(); nx * ny];
        let clampi = |v: f64, n: usize| (v.floor().max(0.0) as usize).min(n - 1);
        for t in 0..tri.num_triangles() {
            let c = tri.corners(t);
            let (mut a, mut b) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
            for p in c {
                for k in 0..2 {
                    a[k] = a[k].min(p[k]);
                    b[k] = b[k].max(p[k]);
                }
            }
            let (i0, i1) = (clampi((a[0] - lo[0]) / cell, nx), clampi((b[0] - lo[0]) / cell, nx));
            let (j0, j1) = (clampi((a[1] - lo[1]) / cell, ny), clampi((b[1] - lo[1]) / cell, ny));
            for j in j0..=j1 {
                for i in i0..=i1 {
                    buckets[j * nx + i].push(t);
                }
            }
        }
        PointLocator { origin: lo, cell, nx, ny, buckets }
    }

    /// Containing triangle and barycentric coordinates of `p`.
    pub fn locate(&self, tri: &Triangulation, p: Point) -> Option<(usize, [f64; 3])> {
        let i = ((p[0] - self.origin[0]) / self.cell).floor();
        let j = ((p[1] - self.origin[1]) / self.cell).floor();
        let i = (i.max(0.0) as usize).min(self.nx - 1);
        let j = (j.max(0.0) as usize).min(self.ny - 1);
        let tol = 1e-10;
        for &t in &self.buckets[j * self.nx + i] {
            let [a, b, c] = tri.corners(t);
            let det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
            let l1 = ((p[0] - a[0]) * (c[1] - a[1]) - (p[1] - a[1]) * (c[0] - a[0])) / det;
            let l2 = ((b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])) / det;
            let l0 = 1.0 - l1 - l2;
            if l0 >= -tol && l1 >= -tol && l2 >= -tol {
                return Some((t, [l0, l1, l2]));
            }
        }
        None
    }
}

/// Nodal values on `fine` of the piecewise linear interpolant of `values`
/// on `coarse`; exact when `fine` refines `coarse`.
pub fn prolongate(coarse: &Triangulation, values: &[f64], fine: &Triangulation) -> Result<Vec<f64>> {
    let field = P1Field::interpolate(coarse, values.to_vec())?;
    let locator = PointLocator::new(coarse);
    fine.points()
        .iter()
        .map(|&p| {
            field
                .evaluate(&locator, p)
                .ok_or_else(|| Error::InvalidArgument(format!("point ({}, {}) outside coarse mesh", p[0], p[1])))
        })
        .collect()
}
