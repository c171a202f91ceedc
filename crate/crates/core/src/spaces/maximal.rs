use super::VertexFunction;
use crate::graph::{dijkstra, WeightedGraph};
use crate::linalg::Scalar;
use crate::Exec;

/// Uncentered maximal function
/// `ℳf(x) = sup_{B ∋ x} V(B)⁻¹ Σ_{y∈B} |f(y)| m(y)` over all balls
/// `B(c, r)`; for each center only the radii where the ball changes matter.
pub fn maximal_function<T: Scalar>(g: &WeightedGraph, f: &VertexFunction<T>, exec: Exec) -> VertexFunction<f64> {
    let n = g.num_vertices();
    let abs: Vec<f64> = f.values().iter().map(|v| v.modulus()).collect();
    let chunks = n.clamp(1, 64);
    let partial = exec.map(chunks, |k| {
        let mut best = vec![0.0f64; n];
        let mut order: Vec<usize> = (0..n).collect();
        for c in (k * n / chunks)..((k + 1) * n / chunks) {
            let dist = dijkstra(g, c, f64::INFINITY);
            order.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)));
            // averages over each prefix that ends at a distance change
            let mut groups: Vec<(usize, f64)> = Vec::new();
            let (mut mass, mut vol) = (0.0, 0.0);
            for (i, &y) in order.iter().enumerate() {
                mass += abs[y] * g.m(y);
                vol += g.m(y);
                if i + 1 == n || dist[order[i + 1]] > dist[y] {
                    groups.push((i + 1, mass / vol));
                }
            }
            let mut suffix = vec![0.0f64; groups.len()];
            let mut run = 0.0f64;
            for j in (0..groups.len()).rev() {
                run = run.max(groups[j].1);
                suffix[j] = run;
            }
            let mut j = 0;
            for (i, &y) in order.iter().enumerate() {
                while groups[j].0 <= i {
                    j += 1;
                }
                best[y] = best[y].max(suffix[j]);
            }
        }
        best
    });
    let mut out = vec![0.0f64; n];
    for part in partial {
        for (o, v) in out.iter_mut().zip(part) {
            *o = o.max(v);
        }
    }
    VertexFunction::from_values(out)
}
