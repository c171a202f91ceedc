use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{differential, gradient_length, EdgeFunction, VertexFunction};
use crate::exec::{max_of, pairwise_sum};
use crate::graph::{dijkstra, WeightedGraph};
use crate::linalg::Scalar;
use crate::{Error, Exec, Result};

/// Above this many vertex pairs the Hölder seminorm is estimated from a
/// sample of pairs instead of computed exactly.
pub const DEFAULT_PAIR_CAP: usize = 20_000_000;

pub const NORM_CSV_HEADER: &str = "graph_id,p,eta,lp,grad_lp,w1p,holder_semi,holder_norm";

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("exponent p = {p} must lie in [1, ∞]")))
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("Hölder exponent η = {eta} must lie in (0, 1]")))
    }
}

fn weighted_p_sum(values: impl Iterator<Item = (f64, f64)>, p: f64) -> f64 {
    if p.is_infinite() {
        return values.map(|(v, _)| v).fold(0.0, f64::max);
    }
    let terms: Vec<f64> = values.map(|(v, w)| v.powf(p) * w).collect();
    pairwise_sum(&terms).powf(1.0 / p)
}

/// `‖f‖_{L^p(Γ, m)}`, `p = ∞` allowed.
pub fn lp_norm<T: Scalar>(g: &WeightedGraph, f: &VertexFunction<T>, p: f64) -> f64 {
    weighted_p_sum(
        f.values().iter().enumerate().map(|(x, v)| (v.modulus(), g.m(x))),
        p,
    )
}

/// `‖F‖_{L^p(E, μ)}`, summing over ordered pairs.
pub fn lp_edge_norm<T: Scalar>(g: &WeightedGraph, f: &EdgeFunction<T>, p: f64) -> f64 {
    weighted_p_sum(
        f.values()
            .iter()
            .zip(g.edges())
            .map(|(v, e)| (v.modulus(), 2.0 * e.mu)),
        p,
    )
}

/// `‖f‖_{W^{1,p}} = ‖f‖_p + ‖∇f‖_p`
pub fn w1p_norm<T: Scalar>(g: &WeightedGraph, f: &VertexFunction<T>, p: f64) -> f64 {
    lp_norm(g, f, p) + lp_norm(g, &gradient_length(g, f), p)
}

/// Interval containing `‖df‖_{L^p(E)} / ‖∇f‖_{L^p(Γ)}` for every non-constant
/// `f`, computed from `N`, `C_W` and the measure comparability constant.
pub fn edge_gradient_bracket(g: &WeightedGraph, p: f64) -> (f64, f64) {
    let n = g.max_degree() as f64;
    let cw = g.weight_control();
    let cmu = g.measure_control();
    if p.is_infinite() {
        return (1.0 / n.sqrt(), cw);
    }
    let mix = n.powf(p / 2.0 - 1.0);
    let lo = 1.0 / (n * cmu * mix.max(1.0));
    let hi = cw.powf(p) / mix.min(1.0);
    (lo.powf(1.0 / p), hi.powf(1.0 / p))
}

/// How the Hölder seminorm visits vertex pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HolderSampling {
    /// exact below `pair_cap` pairs, sampled above
    Auto { pair_cap: usize, seed: u64 },
    Exact,
    /// every edge plus all pairs from `sources` random vertices
    Sampled { sources: usize, seed: u64 },
}

impl Default for HolderSampling {
    fn default() -> Self {
        HolderSampling::Auto {
            pair_cap: DEFAULT_PAIR_CAP,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolderValue {
    pub value: f64,
    /// `false` when only a sample of pairs was visited (the value is then a
    /// lower bound)
    pub exact: bool,
    pub pairs: usize,
}

/// `|f|_{Ċ^η} = sup_{x≠y} |f(x) − f(y)| / d(x, y)^η`
pub fn holder_seminorm<T: Scalar>(g: &WeightedGraph, f: &VertexFunction<T>, eta: f64) -> Result<HolderValue> {
    holder_seminorm_with(g, f, eta, HolderSampling::default(), Exec::default())
}

pub fn holder_seminorm_with<T: Scalar>(
    g: &WeightedGraph,
    f: &VertexFunction<T>,
    eta: f64,
    sampling: HolderSampling,
    exec: Exec,
) -> Result<HolderValue> {
    check_eta(eta)?;
    let n = g.num_vertices();
    let all_pairs = n * (n - 1) / 2;
    let sources: Vec<usize> = match sampling {
        HolderSampling::Exact => (0..n).collect(),
        HolderSampling::Auto { pair_cap, .. } if all_pairs <= pair_cap => (0..n).collect(),
        HolderSampling::Auto { pair_cap, seed } => pick_sources(n, (pair_cap / n).max(1), seed),
        HolderSampling::Sampled { sources, seed } => pick_sources(n, sources.clamp(1, n), seed),
    };
    let exact = sources.len() == n;
    let vals = f.values();
    let per_source = exec.map(sources.len(), |k| {
        let x = sources[k];
        let dist = dijkstra(g, x, f64::INFINITY);
        let mut best = 0.0f64;
        for y in 0..n {
            if y != x && (!exact || y > x) {
                let r = (vals[x] - vals[y]).modulus() / dist[y].powf(eta);
                best = best.max(r);
            }
        }
        best
    });
    let mut value = max_of(&per_source);
    let mut pairs = if exact {
        all_pairs
    } else {
        sources.len() * (n - 1)
    };
    if !exact {
        for e in g.edges() {
            value = value.max((vals[e.a] - vals[e.b]).modulus() / e.h.powf(eta));
        }
        pairs += g.num_edges();
    }
    Ok(HolderValue { value, exact, pairs })
}

fn pick_sources(n: usize, count: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = sample(&mut rng, n, count.min(n)).into_vec();
    s.sort_unstable();
    s
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormKind {
    LpVertex,
    LpEdge,
    W1p,
    /// `‖f‖_{C^η} = ‖f‖_∞ + |f|_{Ċ^η}`
    Holder(f64),
}

/// One norm of `f`.
pub fn norm<T: Scalar>(g: &WeightedGraph, f: &VertexFunction<T>, p: f64, kind: NormKind) -> Result<f64> {
    check_p(p)?;
    Ok(match kind {
        NormKind::LpVertex => lp_norm(g, f, p),
        NormKind::LpEdge => lp_edge_norm(g, &differential(g, f), p),
        NormKind::W1p => w1p_norm(g, f, p),
        NormKind::Holder(eta) => lp_norm(g, f, f64::INFINITY) + holder_seminorm(g, f, eta)?.value,
    })
}

/// All norms of one function at exponent `p` (and Hölder exponent `eta`).
#[derive(Clone, Debug, PartialEq)]
pub struct NormReport {
    pub p: f64,
    pub lp: f64,
    pub grad_lp: f64,
    pub w1p: f64,
    pub lp_edge: f64,
    pub eta: Option<f64>,
    pub holder_semi: Option<HolderValue>,
    pub holder_norm: Option<f64>,
}

pub fn norm_report<T: Scalar>(
    g: &WeightedGraph,
    f: &VertexFunction<T>,
    p: f64,
    eta: Option<f64>,
) -> Result<NormReport> {
    check_p(p)?;
    let lp = lp_norm(g, f, p);
    let grad_lp = lp_norm(g, &gradient_length(g, f), p);
    let lp_edge = lp_edge_norm(g, &differential(g, f), p);
    let (holder_semi, holder_norm) = match eta {
        Some(eta) => {
            let semi = holder_seminorm(g, f, eta)?;
            (Some(semi), Some(lp_norm(g, f, f64::INFINITY) + semi.value))
        }
        None => (None, None),
    };
    Ok(NormReport {
        p,
        lp,
        grad_lp,
        w1p: lp + grad_lp,
        lp_edge,
        eta,
        holder_semi,
        holder_norm,
    })
}

impl NormReport {
    /// Row matching [`NORM_CSV_HEADER`]; Hölder columns are empty when no
    /// exponent was requested.
    pub fn csv_row(&self, graph_id: &str) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{graph_id},{},{},{},{},{},{},{}",
            self.p,
            opt(self.eta),
            self.lp,
            self.grad_lp,
            self.w1p,
            opt(self.holder_semi.map(|h| h.value)),
            opt(self.holder_norm)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_norms() {
        let g = WeightedGraph::new(3, &[(0, 1, 1.0, 2.0), (1, 2, 1.0, 3.0)], &[]).unwrap();
        let f = VertexFunction::<f64>::indicator(&g, 1);
        for p in [1.0, 2.0, 3.5] {
            assert!((lp_norm(&g, &f, p) - 5f64.powf(1.0 / p)).abs() < 1e-14);
        }
        assert_eq!(lp_norm(&g, &f.scaled(-4.0), f64::INFINITY), 4.0);
    }

    #[test]
    fn two_vertex_holder() {
        let g = WeightedGraph::path(&[1.0]).unwrap();
        let f = VertexFunction::<f64>::indicator(&g, 0);
        let h = holder_seminorm(&g, &f, 0.5).unwrap();
        assert_eq!(h.value, 1.0);
        assert!(h.exact);
        assert!(holder_seminorm(&g, &f, 0.0).is_err());
    }

    #[test]
    fn sampled_holder_is_a_lower_bound() {
        let g = WeightedGraph::lattice_box(12, 12).unwrap();
        let f = VertexFunction::from_fn(&g, |x| ((x * 7919) % 13) as f64);
        let exact = holder_seminorm_with(&g, &f, 0.5, HolderSampling::Exact, Exec::Sequential).unwrap();
        let sampled = holder_seminorm_with(
            &g,
            &f,
            0.5,
            HolderSampling::Sampled { sources: 5, seed: 3 },
            Exec::Sequential,
        )
        .unwrap();
        assert!(!sampled.exact);
        assert!(sampled.value <= exact.value);
        assert!(sampled.value > 0.0);
    }

    #[test]
    fn report_row() {
        let g = WeightedGraph::path(&[1.0]).unwrap();
        let f = VertexFunction::<f64>::indicator(&g, 0);
        let r = norm_report(&g, &f, 2.0, Some(1.0)).unwrap();
        assert_eq!(r.w1p, r.lp + r.grad_lp);
        let row = r.csv_row("g");
        assert!(row.starts_with("g,2,1,1,1.414"));
        assert!(row.ends_with(",1,2"));
        assert!(norm_report(&g, &f, 0.5, None).is_err());
    }
}
