use num_complex::Complex64;

use super::EdgeCoefficients;
use crate::graph::WeightedGraph;
use crate::linalg::{relative_residual, reverse_cuthill_mckee, BandLu, CsrMatrix, TripletBuilder};
use crate::{Error, Result};

/// Matrix of `L`, determined by
/// `Σ_x Lu(x) v̄(x) m(x) = Σ_{(x,y)} c_xy du(x,y) dv(x,y)‾ μ_xy`:
/// `(Lu)(z) = m(z)⁻¹ Σ_{y∼z} (c_zy + c_yz) μ_zy (u(z) − u(y)) / h_zy²`.
#[derive(Clone, Debug)]
pub struct EllipticOperator {
    graph: WeightedGraph,
    coeffs: EdgeCoefficients,
    matrix: CsrMatrix<Complex64>,
    ordering: Vec<usize>,
}

pub fn build_operator(g: &WeightedGraph, c: &EdgeCoefficients) -> Result<EllipticOperator> {
    if c.values().len() != g.num_edges() {
        return Err(Error::DimensionMismatch {
            expected: g.num_edges(),
            got: c.values().len(),
        });
    }
    if !(c.delta_edge() > 0.0) {
        return Err(Error::NotElliptic(format!("δ_edge = {} is not positive", c.delta_edge())));
    }
    let n = g.num_vertices();
    let mut t = TripletBuilder::with_capacity(n, n, n + 2 * g.num_edges());
    for z in 0..n {
        let inv_m = 1.0 / g.m(z);
        let mut diag = Complex64::new(0.0, 0.0);
        for (y, id) in g.neighbors(z) {
            let e = g.edge(id);
            let w = c.symmetric_sum(id) * (e.mu / (e.h * e.h) * inv_m);
            diag += w;
            t.push(z, y, -w);
        }
        t.push(z, z, diag);
    }
    let matrix = t.build();
    let ordering = reverse_cuthill_mckee(&matrix);
    Ok(EllipticOperator {
        graph: g.clone(),
        coeffs: c.clone(),
        matrix,
        ordering,
    })
}

impl EllipticOperator {
    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn coefficients(&self) -> &EdgeCoefficients {
        &self.coeffs
    }

    pub fn matrix(&self) -> &CsrMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `true` when the matrix has real entries.
    pub fn is_real(&self) -> bool {
        self.coeffs.is_real()
    }

    pub fn apply(&self, u: &[Complex64]) -> Vec<Complex64> {
        self.matrix.mul_vec(u)
    }

    /// `⟨Lu, v⟩_m = Σ Lu(x) v̄(x) m(x)`
    pub fn pairing(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        let lu = self.apply(u);
        lu.iter()
            .zip(v)
            .enumerate()
            .map(|(x, (a, b))| a * b.conj() * self.graph.m(x))
            .sum()
    }

    /// `Σ_{(x,y)∈E} c_xy du(x,y) dv(x,y)‾ μ_xy` over ordered pairs.
    pub fn form(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (id, e) in self.graph.edges().iter().enumerate() {
            let (cab, cba) = self.coeffs.values()[id];
            let du = (u[e.b] - u[e.a]) / e.h;
            let dv = (v[e.b] - v[e.a]) / e.h;
            // (b, a) carries du(b,a) dv(b,a)‾ = du dv̄ as well
            s += (cab + cba) * du * dv.conj() * e.mu;
        }
        s
    }

    /// `M_L + λI`
    pub fn shifted(&self, lambda: Complex64) -> CsrMatrix<Complex64> {
        self.matrix
            .add_diagonal(lambda)
            .expect("operator matrix is square")
    }

    /// Factorization of `M_L + λI` (or of its transpose).
    pub fn factor(&self, lambda: Complex64, transpose: bool) -> Result<BandLu<Complex64>> {
        let a = self.shifted(lambda);
        let a = if transpose { a.transpose() } else { a };
        BandLu::factor_with_permutation(&a, self.ordering.clone())
    }

    /// Solves `Lu + λu = f`; the relative residual must not exceed `1e−10`.
    pub fn resolvent_solve(&self, lambda: Complex64, f: &[Complex64]) -> Result<Vec<Complex64>> {
        if f.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: f.len(),
            });
        }
        if f.iter().all(|v| *v == Complex64::new(0.0, 0.0)) {
            return Ok(f.to_vec());
        }
        let lu = self.factor(lambda, false)?;
        let u = lu.solve(f);
        let residual = relative_residual(&self.shifted(lambda), &u, f);
        if !(residual <= 1e-10) {
            return Err(Error::NotConverged { residual, iterations: 0 });
        }
        Ok(u)
    }
}
