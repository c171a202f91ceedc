use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::WeightedGraph;
use crate::{Error, Result};

/// Above this vertex count the dense computation of `δ_exact` is skipped.
pub const DENSE_DELTA_LIMIT: usize = 1500;

/// Oriented edge coefficients `c_xy`, stored per edge id as
/// `(c_ab, c_ba)` with `a < b`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeCoefficients {
    values: Vec<(Complex64, Complex64)>,
    c_inf: f64,
    delta_edge: f64,
    delta_exact: Option<f64>,
}

impl EdgeCoefficients {
    /// Validates `Re(c_xy + c_yx)/2 > 0` on every edge and computes the
    /// bound `C_∞` and the ellipticity constants.
    pub fn new(g: &WeightedGraph, values: Vec<(Complex64, Complex64)>) -> Result<Self> {
        if values.len() != g.num_edges() {
            return Err(Error::DimensionMismatch {
                expected: g.num_edges(),
                got: values.len(),
            });
        }
        let mut c_inf = 0.0f64;
        let mut delta_edge = f64::INFINITY;
        for (id, &(cab, cba)) in values.iter().enumerate() {
            if !(cab.re.is_finite() && cab.im.is_finite() && cba.re.is_finite() && cba.im.is_finite()) {
                let e = g.edge(id);
                return Err(Error::InvalidArgument(format!(
                    "non-finite coefficient on edge ({}, {})",
                    e.a, e.b
                )));
            }
            c_inf = c_inf.max(cab.norm()).max(cba.norm());
            delta_edge = delta_edge.min((cab + cba).re / 2.0);
        }
        if !(delta_edge > 0.0) {
            return Err(Error::NotElliptic(format!(
                "min Re(c_xy + c_yx)/2 = {delta_edge} is not positive"
            )));
        }
        let delta_exact = if g.num_vertices() <= DENSE_DELTA_LIMIT {
            Some(exact_delta(g, &values)?)
        } else {
            None
        };
        Ok(EdgeCoefficients {
            values,
            c_inf,
            delta_edge,
            delta_exact,
        })
    }

    /// `c_xy = c` for every oriented edge.
    pub fn uniform(g: &WeightedGraph, c: Complex64) -> Result<Self> {
        Self::new(g, vec![(c, c); g.num_edges()])
    }

    /// `c_xy = c_yx = 1 + i·amplitude·s_e` with `s_e` uniform in `[−1, 1]`
    /// per edge. A real antisymmetric perturbation cancels in `c_xy + c_yx`
    /// and leaves the operator unchanged; the imaginary one makes it
    /// non-self-adjoint.
    pub fn perturbed(g: &WeightedGraph, amplitude: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..g.num_edges())
            .map(|_| {
                let c = Complex64::new(1.0, amplitude * rng.gen_range(-1.0..1.0));
                (c, c)
            })
            .collect();
        Self::new(g, values)
    }

    /// `c_xy` for adjacent `x`, `y`.
    pub fn get(&self, g: &WeightedGraph, x: usize, y: usize) -> Option<Complex64> {
        let e = g.edge_between(x, y)?;
        let (cab, cba) = self.values[e];
        Some(if x < y { cab } else { cba })
    }

    /// `(c_ab, c_ba)` by edge id.
    pub fn values(&self) -> &[(Complex64, Complex64)] {
        &self.values
    }

    /// `c_xy + c_yx` by edge id.
    pub fn symmetric_sum(&self, id: usize) -> Complex64 {
        let (a, b) = self.values[id];
        a + b
    }

    pub fn c_inf(&self) -> f64 {
        self.c_inf
    }

    pub fn delta_edge(&self) -> f64 {
        self.delta_edge
    }

    /// Sharp ellipticity constant, when the graph is small enough for a
    /// dense eigensolve.
    pub fn delta_exact(&self) -> Option<f64> {
        self.delta_exact
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|(a, b)| a.im == 0.0 && b.im == 0.0)
    }
}

/// Smallest value of `Re Σ c_xy |du|² μ / Σ |du|² μ` over non-constant `u`.
fn exact_delta(g: &WeightedGraph, values: &[(Complex64, Complex64)]) -> Result<f64> {
    let n = g.num_vertices();
    if n < 2 {
        return Ok(f64::INFINITY);
    }
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut b = DMatrix::<f64>::zeros(n, n);
    for (id, e) in g.edges().iter().enumerate() {
        let w = e.mu / (e.h * e.h);
        let (cab, cba) = values[id];
        let wa = (cab + cba).re * w;
        let wb = 2.0 * w;
        for (m, s) in [(&mut a, wa), (&mut b, wb)] {
            m[(e.a, e.a)] += s;
            m[(e.b, e.b)] += s;
            m[(e.a, e.b)] -= s;
            m[(e.b, e.a)] -= s;
        }
    }
    // constants span the common kernel: pin the last vertex
    let k = n - 1;
    let a = a.view((0, 0), (k, k)).clone_owned();
    let b = b.view((0, 0), (k, k)).clone_owned();
    let chol = b
        .cholesky()
        .ok_or_else(|| Error::InvalidGraph("edge form is not positive definite".into()))?;
    let linv = chol
        .l()
        .solve_lower_triangular(&DMatrix::identity(k, k))
        .ok_or_else(|| Error::InvalidGraph("singular Cholesky factor".into()))?;
    let c = &linv * a * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    Ok(c.symmetric_eigenvalues().min())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_constants() {
        let g = WeightedGraph::lattice_box(4, 4).unwrap();
        let c = EdgeCoefficients::uniform(&g, Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(c.c_inf(), 1.0);
        assert_eq!(c.delta_edge(), 1.0);
        assert!((c.delta_exact().unwrap() - 1.0).abs() < 1e-12);
        assert!(c.is_real());
        assert!(EdgeCoefficients::uniform(&g, Complex64::new(-1.0, 0.0)).is_err());
    }

    #[test]
    fn exact_delta_dominates_edge_delta() {
        let g = WeightedGraph::lattice_box(5, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let values = (0..g.num_edges())
            .map(|_| {
                (
                    Complex64::new(rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0)),
                    Complex64::new(rng.gen_range(0.5..2.0), 0.0),
                )
            })
            .collect();
        let c = EdgeCoefficients::new(&g, values).unwrap();
        assert!(c.delta_exact().unwrap() >= c.delta_edge() - 1e-12);
    }
}
