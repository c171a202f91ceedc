use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{gradient_length, holder_seminorm, lp_norm, w1p_norm, VertexFunction};
use crate::graph::{dijkstra, WeightedGraph};
use crate::{Error, Result};

/// Largest observed embedding ratios over random and structured functions.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingReport {
    pub p: f64,
    /// `σp / (σ − p)` when `p < σ`
    pub p_star: Option<f64>,
    /// `1 − σ/p` when `p > σ`
    pub eta: Option<f64>,
    /// `max ‖f‖_{p*} / ‖∇f‖_p`
    pub sobolev_ratio_max: Option<f64>,
    /// `max ‖f‖_{C^η} / ‖f‖_{W^{1,p}}`
    pub holder_ratio_max: Option<f64>,
    pub candidates: usize,
}

const SIGMA: f64 = 2.0;

/// Probes `‖f‖_{p*} ≲ ‖∇f‖_p` (`p < 2`) or `W^{1,p} ↪ C^η` (`p > 2`) with
/// volume growth exponent `σ = 2`, over `trials` random zero-boundary
/// functions plus vertex indicators, tents and the distance to the boundary.
pub fn embedding_report(g: &WeightedGraph, p: f64, trials: usize, seed: u64) -> Result<EmbeddingReport> {
    if !(p >= 1.0 && p.is_finite()) || p == SIGMA {
        return Err(Error::InvalidArgument(format!(
            "embedding needs 1 ≤ p < σ = 2 (Sobolev) or p > σ = 2 (Hölder), got p = {p}"
        )));
    }
    let candidates = candidates(g, trials, seed);
    let mut report = EmbeddingReport {
        p,
        p_star: None,
        eta: None,
        sobolev_ratio_max: None,
        holder_ratio_max: None,
        candidates: candidates.len(),
    };
    if p < SIGMA {
        let p_star = SIGMA * p / (SIGMA - p);
        let mut best = 0.0f64;
        for f in &candidates {
            let grad = lp_norm(g, &gradient_length(g, f), p);
            if grad > 0.0 {
                best = best.max(lp_norm(g, f, p_star) / grad);
            }
        }
        report.p_star = Some(p_star);
        report.sobolev_ratio_max = Some(best);
    } else {
        let eta = 1.0 - SIGMA / p;
        let mut best = 0.0f64;
        for f in &candidates {
            let w = w1p_norm(g, f, p);
            if w > 0.0 {
                let c = lp_norm(g, f, f64::INFINITY) + holder_seminorm(g, f, eta)?.value;
                best = best.max(c / w);
            }
        }
        report.eta = Some(eta);
        report.holder_ratio_max = Some(best);
    }
    Ok(report)
}

fn candidates(g: &WeightedGraph, trials: usize, seed: u64) -> Vec<VertexFunction<f64>> {
    let n = g.num_vertices();
    let interior = if g.has_boundary() {
        g.interior_vertices()
    } else {
        (0..n).collect()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..trials {
        let f = VertexFunction::from_values((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect());
        out.push(f.zero_boundary(g));
    }
    let picks: Vec<usize> = (0..5).map(|k| interior[k * interior.len() / 5]).collect();
    for &x in &picks {
        out.push(VertexFunction::indicator(g, x));
    }
    if g.has_boundary() {
        let mut to_boundary = vec![f64::INFINITY; n];
        for b in g.boundary_vertices() {
            let d = dijkstra(g, b, f64::INFINITY);
            for (t, v) in to_boundary.iter_mut().zip(d) {
                *t = t.min(v);
            }
        }
        out.push(VertexFunction::from_values(to_boundary));
    }
    for &c in picks.iter().take(3) {
        let d = dijkstra(g, c, f64::INFINITY);
        let radius = d.iter().copied().fold(0.0, f64::max) / 4.0;
        let tent = VertexFunction::from_fn(g, |x| (radius - d[x]).max(0.0));
        out.push(tent.zero_boundary(g));
    }
    out
}
