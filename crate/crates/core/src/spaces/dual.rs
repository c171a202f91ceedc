use super::{differential, gradient_length, lp_edge_norm, lp_norm, VertexFunction};
use crate::graph::WeightedGraph;
use crate::linalg::{BandLu, CsrMatrix, TripletBuilder};
use crate::{Error, Result};

/// Norm on `W^{1,p'}_0` against which the dual norm is taken.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SobolevVariant {
    /// `(‖v‖₂² + ‖dv‖²_{L²(E)})^{1/2}`, independent of `p`
    #[default]
    Hilbertian,
    /// `‖v‖_{p'} + ‖∇v‖_{p'}`
    Sum,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AscentOptions {
    pub variant: SobolevVariant,
    /// relative improvement below which the ascent stops
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for AscentOptions {
    fn default() -> Self {
        AscentOptions {
            variant: SobolevVariant::Sum,
            tol: 1e-6,
            max_iter: 5000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DualMode {
    /// one SPD solve, Hilbertian variant, `p = 2` only
    ExactP2,
    Ascent(AscentOptions),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualNorm {
    pub value: f64,
    pub variant: SobolevVariant,
    /// `true` for the closed-form solve; ascent values are lower bounds
    pub exact: bool,
    pub converged: bool,
    pub iterations: usize,
}

/// `(‖v‖₂² + ‖dv‖²_{L²(E)})^{1/2}`
pub fn hilbertian_norm(g: &WeightedGraph, v: &VertexFunction<f64>) -> f64 {
    lp_norm(g, v, 2.0).hypot(lp_edge_norm(g, &differential(g, v), 2.0))
}

/// `‖v‖_q + ‖∇v‖_q`
pub fn sum_norm(g: &WeightedGraph, v: &VertexFunction<f64>, q: f64) -> f64 {
    lp_norm(g, v, q) + lp_norm(g, &gradient_length(g, v), q)
}

struct FreeSpace {
    /// free vertex of each reduced index
    vertices: Vec<usize>,
    n: usize,
}

impl FreeSpace {
    fn new(g: &WeightedGraph) -> Self {
        let vertices = if g.has_boundary() {
            g.interior_vertices()
        } else {
            (0..g.num_vertices()).collect()
        };
        FreeSpace {
            vertices,
            n: g.num_vertices(),
        }
    }

    fn expand(&self, r: &[f64]) -> VertexFunction<f64> {
        let mut full = vec![0.0; self.n];
        for (k, &x) in self.vertices.iter().enumerate() {
            full[x] = r[k];
        }
        VertexFunction::from_values(full)
    }

    fn restrict(&self, full: &[f64]) -> Vec<f64> {
        self.vertices.iter().map(|&x| full[x]).collect()
    }
}

/// Gram matrix of the Hilbertian norm on the free vertices.
fn hilbertian_gram(g: &WeightedGraph, space: &FreeSpace) -> CsrMatrix<f64> {
    let mut index = vec![usize::MAX; g.num_vertices()];
    for (k, &x) in space.vertices.iter().enumerate() {
        index[x] = k;
    }
    let mut t = TripletBuilder::new(space.vertices.len(), space.vertices.len());
    for (k, &x) in space.vertices.iter().enumerate() {
        t.push(k, k, g.m(x));
    }
    for e in g.edges() {
        // ordered pairs (a,b) and (b,a) both contribute μ/h² (v_b − v_a)²
        let w = 2.0 * e.mu / (e.h * e.h);
        let (ia, ib) = (index[e.a], index[e.b]);
        if ia != usize::MAX {
            t.push(ia, ia, w);
        }
        if ib != usize::MAX {
            t.push(ib, ib, w);
        }
        if ia != usize::MAX && ib != usize::MAX {
            t.push(ia, ib, -w);
            t.push(ib, ia, -w);
        }
    }
    t.build()
}

/// Norm of `f` in `W^{-1,p}`, the dual of `W^{1,p'}_0` (of `W^{1,p'}` when the
/// graph has no boundary) under `⟨f, v⟩ = Σ f(x) v(x) m(x)`.
pub fn dual_norm(g: &WeightedGraph, f: &VertexFunction<f64>, p: f64, mode: DualMode) -> Result<DualNorm> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!("dual norm needs 1 < p < ∞, got {p}")));
    }
    if f.len() != g.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: g.num_vertices(),
            got: f.len(),
        });
    }
    let space = FreeSpace::new(g);
    let b: Vec<f64> = space.vertices.iter().map(|&x| f.get(x) * g.m(x)).collect();
    let gram = hilbertian_gram(g, &space);
    let lu = BandLu::factor(&gram)?;
    match mode {
        DualMode::ExactP2 => {
            if p != 2.0 {
                return Err(Error::InvalidArgument(format!(
                    "the closed-form dual norm is only available for p = 2, got {p}"
                )));
            }
            let v = lu.solve(&b);
            let value = b.iter().zip(&v).map(|(a, c)| a * c).sum::<f64>().max(0.0).sqrt();
            Ok(DualNorm {
                value,
                variant: SobolevVariant::Hilbertian,
                exact: true,
                converged: true,
                iterations: 0,
            })
        }
        DualMode::Ascent(opts) => Ok(ascent(g, &space, &b, &gram, &lu, p / (p - 1.0), opts)),
    }
}

struct Objective<'a> {
    g: &'a WeightedGraph,
    space: &'a FreeSpace,
    b: &'a [f64],
    gram: &'a CsrMatrix<f64>,
    q: f64,
    variant: SobolevVariant,
}

impl Objective<'_> {
    fn norm(&self, v: &[f64]) -> f64 {
        match self.variant {
            SobolevVariant::Hilbertian => {
                let hv = self.gram.mul_vec(v);
                v.iter().zip(&hv).map(|(a, c)| a * c).sum::<f64>().max(0.0).sqrt()
            }
            SobolevVariant::Sum => sum_norm(self.g, &self.space.expand(v), self.q),
        }
    }

    fn value(&self, v: &[f64]) -> f64 {
        let n = self.norm(v);
        if n == 0.0 {
            return 0.0;
        }
        self.b.iter().zip(v).map(|(a, c)| a * c).sum::<f64>() / n
    }

    /// gradient of the norm in reduced coordinates
    fn norm_gradient(&self, v: &[f64]) -> Vec<f64> {
        match self.variant {
            SobolevVariant::Hilbertian => {
                let n = self.norm(v);
                self.gram.mul_vec(v).into_iter().map(|x| x / n).collect()
            }
            SobolevVariant::Sum => {
                let g = self.g;
                let q = self.q;
                let full = self.space.expand(v);
                let fv = full.values();
                let mut grad = vec![0.0; g.num_vertices()];
                let lq = lp_norm(g, &full, q);
                if lq > 0.0 {
                    for x in 0..g.num_vertices() {
                        grad[x] += g.m(x) * fv[x].abs().powf(q - 1.0) * fv[x].signum() / lq.powf(q - 1.0);
                    }
                }
                let grad_len = gradient_length(g, &full);
                let gq = lp_norm(g, &grad_len, q);
                if gq > 0.0 {
                    let floor = 1e-12 * grad_len.values().iter().copied().fold(0.0, f64::max);
                    for x in 0..g.num_vertices() {
                        let gx = grad_len.get(x).max(floor);
                        let hx = g.h_x(x);
                        let c = g.m(x) * gx.powf(q - 2.0) / (hx * hx) / gq.powf(q - 1.0);
                        for (y, _) in g.neighbors(x) {
                            let d = fv[y] - fv[x];
                            grad[y] += c * d;
                            grad[x] -= c * d;
                        }
                    }
                }
                self.space.restrict(&grad)
            }
        }
    }
}

fn ascent(
    g: &WeightedGraph,
    space: &FreeSpace,
    b: &[f64],
    gram: &CsrMatrix<f64>,
    lu: &BandLu<f64>,
    q: f64,
    opts: AscentOptions,
) -> DualNorm {
    let obj = Objective {
        g,
        space,
        b,
        gram,
        q,
        variant: opts.variant,
    };
    let done = |value: f64, converged: bool, iterations: usize| DualNorm {
        value,
        variant: opts.variant,
        exact: false,
        converged,
        iterations,
    };
    if b.iter().all(|&x| x == 0.0) {
        return done(0.0, true, 0);
    }
    let normalize = |v: Vec<f64>| -> Vec<f64> {
        let n = obj.norm(&v);
        v.into_iter().map(|x| x / n).collect()
    };
    let mut v = normalize(b.to_vec());
    let mut value = obj.value(&v);
    let mut step = 1.0;
    let mut quiet = 0;
    for it in 1..=opts.max_iter {
        // ∇J = (b − J ∇N) / N with N(v) = 1
        let gn = obj.norm_gradient(&v);
        let grad: Vec<f64> = b.iter().zip(&gn).map(|(bi, gi)| bi - value * gi).collect();
        let dir = lu.solve(&grad);
        let slope: f64 = grad.iter().zip(&dir).map(|(a, c)| a * c).sum();
        if !(slope > 0.0) {
            return done(value, true, it);
        }
        let dir_norm = obj.norm(&dir);
        let mut alpha = step / dir_norm;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = v.iter().zip(&dir).map(|(a, c)| a + alpha * c).collect();
            let tv = obj.value(&trial);
            if tv >= value + 1e-4 * alpha * slope {
                accepted = Some((trial, tv));
                break;
            }
            alpha *= 0.5;
        }
        let Some((trial, tv)) = accepted else {
            return done(value, true, it);
        };
        step = (2.0 * alpha * dir_norm).min(1.0);
        let gain = (tv - value) / value.abs().max(f64::MIN_POSITIVE);
        v = normalize(trial);
        value = tv;
        if gain < opts.tol {
            quiet += 1;
            if quiet >= 2 {
                return done(value, true, it);
            }
        } else {
            quiet = 0;
        }
    }
    done(value, false, opts.max_iter)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star_with_boundary() -> WeightedGraph {
        WeightedGraph::new(
            4,
            &[(0, 1, 1.0, 1.0), (0, 2, 2.0, 4.0), (0, 3, 1.0, 1.0)],
            &[1, 2, 3],
        )
        .unwrap()
    }

    #[test]
    fn zero_function() {
        let g = star_with_boundary();
        let f = VertexFunction::zeros(&g);
        assert_eq!(dual_norm(&g, &f, 2.0, DualMode::ExactP2).unwrap().value, 0.0);
        let a = dual_norm(&g, &f, 3.0, DualMode::Ascent(AscentOptions::default())).unwrap();
        assert_eq!(a.value, 0.0);
    }

    #[test]
    fn one_free_vertex_closed_form() {
        let g = star_with_boundary();
        let f = VertexFunction::<f64>::indicator(&g, 0);
        // H = m(0) + Σ 2 μ/h² = 6 + 2(1 + 1 + 1) = 12, v* = 1/√H
        let h = 12.0;
        let v_star = 1.0 / f64::sqrt(h);
        let d = dual_norm(&g, &f, 2.0, DualMode::ExactP2).unwrap();
        assert!((d.value - g.m(0) * v_star).abs() < 1e-14);
        let v = VertexFunction::from_values(vec![v_star, 0.0, 0.0, 0.0]);
        assert!((hilbertian_norm(&g, &v) - 1.0).abs() < 1e-14);
        assert!(dual_norm(&g, &f, 3.0, DualMode::ExactP2).is_err());
        assert!(dual_norm(&g, &f, 1.0, DualMode::ExactP2).is_err());
    }
}
