use crate::graph::WeightedGraph;
use crate::linalg::Scalar;
use crate::{Error, Result};

/// Scalar field on the vertices of a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexFunction<T = f64> {
    values: Vec<T>,
}

impl<T: Scalar> VertexFunction<T> {
    pub fn new(g: &WeightedGraph, values: Vec<T>) -> Result<Self> {
        if values.len() != g.num_vertices() {
            return Err(Error::DimensionMismatch {
                expected: g.num_vertices(),
                got: values.len(),
            });
        }
        if let Some(x) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite value at vertex {x}")));
        }
        Ok(VertexFunction { values })
    }

    /// Wraps values without validation.
    pub fn from_values(values: Vec<T>) -> Self {
        VertexFunction { values }
    }

    pub fn zeros(g: &WeightedGraph) -> Self {
        VertexFunction {
            values: vec![T::zero(); g.num_vertices()],
        }
    }

    pub fn from_fn(g: &WeightedGraph, f: impl Fn(usize) -> T) -> Self {
        VertexFunction {
            values: (0..g.num_vertices()).map(f).collect(),
        }
    }

    /// `1_{x}`
    pub fn indicator(g: &WeightedGraph, x: usize) -> Self {
        Self::from_fn(g, |y| if y == x { T::one() } else { T::zero() })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn get(&self, x: usize) -> T {
        self.values[x]
    }

    /// Copy with every boundary value set to zero.
    pub fn zero_boundary(&self, g: &WeightedGraph) -> Self {
        let mut out = self.clone();
        for (v, &b) in out.values.iter_mut().zip(g.boundary_flags()) {
            if b {
                *v = T::zero();
            }
        }
        out
    }

    pub fn vanishes_on_boundary(&self, g: &WeightedGraph) -> bool {
        self.values
            .iter()
            .zip(g.boundary_flags())
            .all(|(v, &b)| !b || *v == T::zero())
    }

    pub fn scaled(&self, a: T) -> Self {
        VertexFunction {
            values: self.values.iter().map(|&v| v * a).collect(),
        }
    }

    /// `a·self + b·other`
    pub fn combine(&self, a: T, other: &Self, b: T) -> Self {
        VertexFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&u, &v)| u * a + v * b)
                .collect(),
        }
    }

    pub fn add_constant(&self, c: T) -> Self {
        VertexFunction {
            values: self.values.iter().map(|&v| v + c).collect(),
        }
    }

    pub fn abs(&self) -> VertexFunction<f64> {
        VertexFunction {
            values: self.values.iter().map(|v| v.modulus()).collect(),
        }
    }
}

/// Antisymmetric function on oriented edges, stored once per unordered edge
/// in the orientation `a → b` with `a < b`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeFunction<T = f64> {
    values: Vec<T>,
}

impl<T: Scalar> EdgeFunction<T> {
    /// Values indexed by edge id, oriented from the smaller endpoint.
    pub fn from_values(values: Vec<T>) -> Self {
        EdgeFunction { values }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// `F(x, y)`, or `None` when `x` and `y` are not adjacent.
    pub fn get(&self, g: &WeightedGraph, x: usize, y: usize) -> Option<T> {
        let e = g.edge_between(x, y)?;
        let v = self.values[e];
        Some(if x < y { v } else { -v })
    }
}

/// `df(x, y) = (f(y) − f(x)) / h_xy`
pub fn differential<T: Scalar>(g: &WeightedGraph, f: &VertexFunction<T>) -> EdgeFunction<T> {
    EdgeFunction {
        values: g
            .edges()
            .iter()
            .map(|e| (f.get(e.b) - f.get(e.a)).scale(1.0 / e.h))
            .collect(),
    }
}

/// `∇f(x) = h_x⁻¹ (Σ_{y∼x} |f(y) − f(x)|²)^{1/2}`
pub fn gradient_length<T: Scalar>(g: &WeightedGraph, f: &VertexFunction<T>) -> VertexFunction<f64> {
    VertexFunction {
        values: (0..g.num_vertices())
            .map(|x| {
                let fx = f.get(x);
                let s: f64 = g.neighbors(x).map(|(y, _)| (f.get(y) - fx).modulus_sqr()).sum();
                s.sqrt() / g.h_x(x)
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn differential_on_one_edge() {
        let g = WeightedGraph::path(&[2.0]).unwrap();
        let f = VertexFunction::new(&g, vec![0.0, 6.0]).unwrap();
        let df = differential(&g, &f);
        assert_eq!(df.get(&g, 0, 1), Some(3.0));
        assert_eq!(df.get(&g, 1, 0), Some(-3.0));
    }

    #[test]
    fn star_indicator_gradient() {
        let g = WeightedGraph::new(
            4,
            &[(0, 1, 1.0, 1.0), (0, 2, 1.0, 1.0), (0, 3, 1.0, 1.0)],
            &[],
        )
        .unwrap();
        let f = VertexFunction::<f64>::indicator(&g, 0);
        assert!((gradient_length(&g, &f).get(0) - 3f64.sqrt()).abs() < 1e-15);
        let c = VertexFunction::from_fn(&g, |_| 2.5);
        assert!(gradient_length(&g, &c).values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn complex_values_use_moduli() {
        let g = WeightedGraph::path(&[1.0]).unwrap();
        let f = VertexFunction::new(&g, vec![Complex64::new(0.0, 0.0), Complex64::new(3.0, 4.0)]).unwrap();
        assert!((gradient_length(&g, &f).get(0) - 5.0).abs() < 1e-15);
        assert!(VertexFunction::new(&g, vec![0.0, f64::NAN]).is_err());
    }
}
