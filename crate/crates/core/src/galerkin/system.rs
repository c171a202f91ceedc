use super::CoefficientField;
use crate::graph::WeightedGraph;
use crate::linalg::{bicgstab, relative_residual, BandLu, CsrMatrix, TripletBuilder};
use crate::mesh::{Point, Triangulation};
use crate::spaces::VertexFunction;
use crate::{Error, Exec, Result};

/// Right-hand side `f` of `div(A∇u) = f`.
#[derive(Clone, Copy)]
pub enum Source<'a> {
    /// values of `f` at the mesh vertices
    Samples(&'a [f64]),
    Density(&'a (dyn Fn(Point) -> f64 + Sync)),
    /// `f = div F`
    Divergence(&'a (dyn Fn(Point) -> [f64; 2] + Sync)),
}

/// `⟨f, φ_x⟩` for every mesh vertex `x` (boundary vertices included).
///
/// Densities use the 3-point vertex rule per triangle; divergence-form data
/// use `⟨div F, φ_x⟩ = −∫ F·∇φ_x` with the edge-midpoint rule for `F`.
pub fn load_pairing(tri: &Triangulation, source: Source<'_>) -> Result<Vec<f64>> {
    let n = tri.num_vertices();
    let mut out = vec![0.0; n];
    match source {
        Source::Samples(values) => {
            if values.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: values.len() });
            }
            for (t, tv) in tri.triangles().iter().enumerate() {
                let w = tri.area(t) / 3.0;
                for &v in tv {
                    out[v] += w * values[v];
                }
            }
        }
        Source::Density(f) => {
            let values: Vec<f64> = tri.points().iter().map(|&p| f(p)).collect();
            if let Some(v) = values.iter().position(|x| !x.is_finite()) {
                let p = tri.points()[v];
                return Err(Error::InvalidArgument(format!("source undefined at ({}, {})", p[0], p[1])));
            }
            return load_pairing(tri, Source::Samples(&values));
        }
        Source::Divergence(field) => {
            for (t, tv) in tri.triangles().iter().enumerate() {
                let [a, b, c] = tri.corners(t);
                let mid = |p: Point, q: Point| [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
                let mut avg = [0.0; 2];
                for m in [mid(a, b), mid(b, c), mid(c, a)] {
                    let f = field(m);
                    avg[0] += f[0] / 3.0;
                    avg[1] += f[1] / 3.0;
                }
                let area = tri.area(t);
                let grads = tri.hat_gradients(t);
                for (i, &v) in tv.iter().enumerate() {
                    out[v] -= area * (avg[0] * grads[i][0] + avg[1] * grads[i][1]);
                }
            }
        }
    }
    Ok(out)
}

/// Galerkin system `K ũ = b` on the interior vertices with
/// `K[x][y] = ∫ A∇φ_y·∇φ_x` and `b[x] = −⟨f, φ_x⟩`.
#[derive(Clone, Debug)]
pub struct P1System {
    tri: Triangulation,
    graph: WeightedGraph,
    /// reduced index → vertex
    interior: Vec<usize>,
    /// vertex → reduced index
    index: Vec<Option<usize>>,
    stiffness: CsrMatrix<f64>,
    load: Vec<f64>,
}

/// Outcome of a Galerkin solve.
#[derive(Clone, Debug)]
pub struct Solution {
    /// nodal values, zero on the boundary
    pub u: VertexFunction<f64>,
    pub residual: f64,
}

impl P1System {
    /// Assembles the stiffness matrix with barycenter quadrature for `A`;
    /// the load starts at zero.
    pub fn assemble(tri: &Triangulation, a: &CoefficientField, exec: Exec) -> Result<Self> {
        let graph = WeightedGraph::from_triangulation(tri)?;
        let interior = tri.interior_vertices();
        if interior.is_empty() {
            return Err(Error::InvalidArgument("mesh has no interior vertex".into()));
        }
        let mut index = vec![None; tri.num_vertices()];
        for (k, &v) in interior.iter().enumerate() {
            index[v] = Some(k);
        }
        let nt = tri.num_triangles();
        let chunks = nt.clamp(1, 64);
        let parts: Vec<Result<TripletBuilder<f64>>> = exec.map(chunks, |c| {
            let mut t = TripletBuilder::with_capacity(interior.len(), interior.len(), 9 * nt / chunks + 9);
            for tri_id in (c * nt / chunks)..((c + 1) * nt / chunks) {
                let m = a.eval(tri.barycenter(tri_id))?;
                let area = tri.area(tri_id);
                let g = tri.hat_gradients(tri_id);
                let verts = tri.triangles()[tri_id];
                for i in 0..3 {
                    let Some(row) = index[verts[i]] else { continue };
                    for j in 0..3 {
                        let Some(col) = index[verts[j]] else { continue };
                        // (A ∇λ_j)·∇λ_i
                        let ag = [
                            m[0][0] * g[j][0] + m[0][1] * g[j][1],
                            m[1][0] * g[j][0] + m[1][1] * g[j][1],
                        ];
                        t.push(row, col, area * (ag[0] * g[i][0] + ag[1] * g[i][1]));
                    }
                }
            }
            Ok(t)
        });
        let mut all = TripletBuilder::new(interior.len(), interior.len());
        for p in parts {
            all.extend(p?);
        }
        let load = vec![0.0; interior.len()];
        Ok(P1System {
            tri: tri.clone(),
            graph,
            interior,
            index,
            stiffness: all.build(),
            load,
        })
    }

    /// Sets `b[x] = −⟨f, φ_x⟩`.
    pub fn with_source(mut self, source: Source<'_>) -> Result<Self> {
        let pairing = load_pairing(&self.tri, source)?;
        self.load = self.interior.iter().map(|&v| -pairing[v]).collect();
        Ok(self)
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    /// Reduced index of a vertex, `None` on the boundary.
    pub fn reduced_index(&self, v: usize) -> Option<usize> {
        self.index[v]
    }

    pub fn stiffness(&self) -> &CsrMatrix<f64> {
        &self.stiffness
    }

    /// Load vector on the interior vertices.
    pub fn load(&self) -> &[f64] {
        &self.load
    }

    fn restrict(&self, f: &VertexFunction<f64>) -> Vec<f64> {
        self.interior.iter().map(|&v| f.get(v)).collect()
    }

    fn extend(&self, r: &[f64]) -> VertexFunction<f64> {
        let mut full = vec![0.0; self.tri.num_vertices()];
        for (k, &v) in self.interior.iter().enumerate() {
            full[v] = r[k];
        }
        VertexFunction::from_values(full)
    }

    /// `Q_h(ũ, ṽ) = ∫ A∇(R_h ũ)·∇(R_h ṽ) = ṽᵀ K ũ`
    pub fn form(&self, u: &VertexFunction<f64>, v: &VertexFunction<f64>) -> f64 {
        let ku = self.stiffness.mul_vec(&self.restrict(u));
        self.restrict(v).iter().zip(&ku).map(|(a, b)| a * b).sum()
    }

    /// Banded LU in reverse Cuthill–McKee order; falls back to BiCGSTAB when
    /// the factorization breaks down.
    pub fn solve(&self) -> Result<Solution> {
        let (x, residual) = match BandLu::factor(&self.stiffness) {
            Ok(lu) => {
                let x = lu.solve(&self.load);
                let r = relative_residual(&self.stiffness, &x, &self.load);
                (x, r)
            }
            Err(Error::FactorizationBreakdown { .. }) => {
                let out = bicgstab(&self.stiffness, &self.load, 1e-12, 20 * self.interior.len() + 100)?;
                (out.x, out.residual)
            }
            Err(e) => return Err(e),
        };
        if !(residual <= 1e-10) {
            return Err(Error::NotConverged { residual, iterations: 0 });
        }
        Ok(Solution { u: self.extend(&x), residual })
    }

    /// `(L_h ũ)(x) = (K ũ)[x] / m(x)` on interior vertices, 0 on the boundary.
    pub fn apply_lh(&self, u: &VertexFunction<f64>) -> VertexFunction<f64> {
        let ku = self.stiffness.mul_vec(&self.restrict(u));
        let scaled: Vec<f64> = self
            .interior
            .iter()
            .zip(&ku)
            .map(|(&v, k)| k / self.graph.m(v))
            .collect();
        self.extend(&scaled)
    }

    /// `f_h(x) = ⟨f, φ_x⟩ / m(x) = −b[x] / m(x)`
    pub fn f_h(&self) -> VertexFunction<f64> {
        let scaled: Vec<f64> = self
            .interior
            .iter()
            .zip(&self.load)
            .map(|(&v, b)| -b / self.graph.m(v))
            .collect();
        self.extend(&scaled)
    }

    /// Largest relative deviation in `L_h ũ = −f_h`.
    pub fn identity_defect(&self, u: &VertexFunction<f64>) -> f64 {
        let lu = self.apply_lh(u);
        let fh = self.f_h();
        let scale = fh.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let worst = lu
            .values()
            .iter()
            .zip(fh.values())
            .fold(0.0f64, |m, (a, b)| m.max((a + b).abs()));
        if scale == 0.0 {
            worst
        } else {
            worst / scale
        }
    }

    /// Matrix-market style coordinate text of `K` (1-based indices).
    pub fn write_system(&self) -> String {
        let mut out = String::new();
        self.stiffness.write_coordinate(&mut out, |v| format!("{v:e}"));
        out
    }
}

/// CSV `vertex_id,x,y,u`.
pub fn write_solution(tri: &Triangulation, u: &VertexFunction<f64>) -> String {
    let mut out = String::from("vertex_id,x,y,u\n");
    for (v, p) in tri.points().iter().enumerate() {
        out.push_str(&format!("{v},{},{},{}\n", p[0], p[1], u.get(v)));
    }
    out
}
