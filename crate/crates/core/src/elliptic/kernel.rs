use std::fmt::Write;

use num_complex::Complex64;

use super::{semigroup_kernel, ContourOptions, EllipticOperator};
use crate::graph::{dijkstra, directed_h_star, HStarRule, WeightedGraph};
use crate::{Error, Exec, Result};

pub const KERNEL_CSV_HEADER: &str = "t,y,x,d,h_star,regime,K_re,K_im,bound_value";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `t ≤ C′ h*_{xy} d(x, y)`: exponential decay in `d / h*`
    A,
    /// `t ≥ C′ h*_{xy} d(x, y)`: Gaussian decay in `d² / t`
    B,
}

impl Regime {
    pub fn of(t: f64, d: f64, h_star: f64, c_prime: f64) -> Regime {
        if t <= c_prime * h_star * d && d > 0.0 {
            Regime::A
        } else {
            Regime::B
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::A => "a",
            Regime::B => "b",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelEntry {
    pub x: usize,
    pub d: f64,
    pub h_star: f64,
    pub k: Complex64,
}

/// Heat kernel values `K_t(x, y)` for one time and one source.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelTable {
    pub t: f64,
    pub y: usize,
    pub entries: Vec<KernelEntry>,
    /// `Σ_x K_t(x, y) m(x)` over the whole graph
    pub mass: Complex64,
    /// largest deviation of `K_t(·,y) m(y)` from the Taylor oracle
    pub oracle_deviation: Option<f64>,
}

/// Tabulates `K_t(x, y)` for `x` in `window` (all vertices when `None`),
/// together with `d(x, y)` and `h*_{xy}`.
pub fn kernel_table(
    op: &EllipticOperator,
    t: f64,
    y: usize,
    window: Option<&[usize]>,
    opts: &ContourOptions,
    exec: Exec,
) -> Result<KernelTable> {
    let g = op.graph();
    let (col, oracle_deviation) = semigroup_kernel(op, t, y, opts, exec)?;
    let mass = col.iter().enumerate().map(|(x, k)| k * g.m(x)).sum();
    let xs: Vec<usize> = match window {
        Some(w) => w.to_vec(),
        None => (0..g.num_vertices()).collect(),
    };
    let dy = dijkstra(g, y, f64::INFINITY);
    let rule = HStarRule::default();
    let h_stars = exec.map(xs.len(), |k| {
        let x = xs[k];
        if x == y {
            return 0.0;
        }
        let dx = dijkstra(g, x, f64::INFINITY);
        let d = dx[y];
        directed_h_star(g, x, &dx, d, rule).min(directed_h_star(g, y, &dy, d, rule))
    });
    let entries = xs
        .iter()
        .zip(h_stars)
        .map(|(&x, h_star)| KernelEntry {
            x,
            d: dy[x],
            h_star,
            k: col[x],
        })
        .collect();
    Ok(KernelTable {
        t,
        y,
        entries,
        mass,
        oracle_deviation,
    })
}

/// `|K| ≤ (C/t) e^{−β s}` with `s = d/h*` (regime a) or `d²/t` (regime b).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundFit {
    pub c: f64,
    pub beta: f64,
    pub pairs: usize,
    pub pass_rate: f64,
}

/// `|K_t(x,y) − K_t(x′,y)| ≤ (C″/t)(d(x,x′)/√t)^η` over neighbouring `x, x′`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolderFit {
    pub c: f64,
    pub eta: f64,
    pub pairs: usize,
    pub pass_rate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelBoundReport {
    pub c_prime: f64,
    /// `None` when no tabulated pair falls in the regime
    pub regime_a: Option<BoundFit>,
    pub regime_b: Option<BoundFit>,
    pub holder: Option<HolderFit>,
    /// `(C′, regime a, regime b)` for each scanned threshold
    pub scan: Vec<(f64, Option<BoundFit>, Option<BoundFit>)>,
}

const BUDGET: f64 = std::f64::consts::LN_2;

/// Envelope `v ≤ a − β s` with `a` fixed: the largest admissible `β`.
fn fit_decay(points: &[(f64, f64)], a: f64, what: &str) -> Result<Option<BoundFit>> {
    if points.is_empty() {
        return Ok(None);
    }
    let mut beta = f64::INFINITY;
    for &(s, v) in points {
        if s > 0.0 {
            beta = beta.min((a - v) / s);
        } else if v > a {
            return Err(Error::BoundFit(format!("{what}: diagonal value exceeds the floor")));
        }
    }
    if !(beta > 0.0) {
        let worst = points
            .iter()
            .filter(|p| p.0 > 0.0)
            .min_by(|p, q| ((a - p.1) / p.0).total_cmp(&((a - q.1) / q.0)))
            .copied()
            .unwrap_or((0.0, 0.0));
        return Err(Error::BoundFit(format!(
            "{what}: no positive decay rate, violating pair at s = {}, ln(t|K|) = {}",
            worst.0, worst.1
        )));
    }
    if beta.is_infinite() {
        beta = f64::MAX;
    }
    let pass = points
        .iter()
        .filter(|&&(s, v)| v <= a - beta * s + 1e-12 * a.abs().max(1.0))
        .count();
    Ok(Some(BoundFit {
        c: a.exp(),
        beta,
        pairs: points.len(),
        pass_rate: pass as f64 / points.len() as f64,
    }))
}

/// One tabulated kernel value with its time and source.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSample {
    pub t: f64,
    pub y: usize,
    pub x: usize,
    pub d: f64,
    pub h_star: f64,
    pub k: Complex64,
}

/// `K_t(x, y) − K_t(x′, y)` for neighbouring `x, x′` at distance `d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelIncrement {
    pub t: f64,
    pub d: f64,
    pub diff: Complex64,
}

fn regime_points(samples: &[KernelSample], c_prime: f64) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for e in samples {
        let m = e.k.norm();
        if m == 0.0 {
            continue;
        }
        let v = (e.t * m).ln();
        match Regime::of(e.t, e.d, e.h_star, c_prime) {
            Regime::A => a.push((e.d / e.h_star, v)),
            Regime::B => b.push((e.d * e.d / e.t, v)),
        }
    }
    (a, b)
}

/// Fits the constants of both kernel bounds and of the Hölder increment.
///
/// The common constant `C` is twice the largest on-diagonal `t|K_t(y,y)|`;
/// each regime then gets the largest decay rate `β` compatible with every
/// tabulated pair. The Hölder exponent is the slope of the tightest
/// envelope of `ln(t|ΔK|)` against `ln(d/√t)` over `η ∈ [−1, 1]`.
pub fn kernel_bound_check(g: &WeightedGraph, tables: &[KernelTable], c_prime: f64) -> Result<KernelBoundReport> {
    if tables.is_empty() {
        return Err(Error::InvalidArgument("no kernel tables".into()));
    }
    let samples: Vec<KernelSample> = tables.iter().flat_map(|t| t.samples()).collect();
    let increments: Vec<KernelIncrement> = tables.iter().flat_map(|t| t.increments(g)).collect();
    fit_kernel_bounds(&samples, &increments, c_prime)
}

/// [`kernel_bound_check`] on plain samples.
pub fn fit_kernel_bounds(
    samples: &[KernelSample],
    increments: &[KernelIncrement],
    c_prime: f64,
) -> Result<KernelBoundReport> {
    let diag = samples
        .iter()
        .filter(|e| e.x == e.y)
        .map(|e| (e.t * e.k.norm()).ln())
        .fold(f64::NEG_INFINITY, f64::max);
    if !diag.is_finite() {
        return Err(Error::BoundFit("samples do not contain the diagonal x = y".into()));
    }
    let a = diag + BUDGET;
    let mut scan = Vec::new();
    let mut main = (None, None);
    let mut thresholds = vec![0.5, 1.0, 2.0];
    if !thresholds.contains(&c_prime) {
        thresholds.push(c_prime);
    }
    for cp in thresholds {
        let (pa, pb) = regime_points(samples, cp);
        let fa = fit_decay(&pa, a, "regime a")?;
        let fb = fit_decay(&pb, a, "regime b")?;
        if cp == c_prime {
            main = (fa, fb);
        }
        scan.push((cp, fa, fb));
    }
    Ok(KernelBoundReport {
        c_prime,
        regime_a: main.0,
        regime_b: main.1,
        holder: holder_fit(increments),
        scan,
    })
}

fn holder_fit(increments: &[KernelIncrement]) -> Option<HolderFit> {
    let pts: Vec<(f64, f64)> = increments
        .iter()
        .filter(|i| i.diff.norm() > 0.0)
        .map(|i| ((i.d / i.t.sqrt()).ln(), (i.t * i.diff.norm()).ln()))
        .collect();
    if pts.is_empty() {
        return None;
    }
    let mut best: Option<(f64, f64, f64)> = None;
    for k in -100..=100 {
        let eta = k as f64 / 100.0;
        let c = pts.iter().map(|&(l, w)| w - eta * l).fold(f64::NEG_INFINITY, f64::max);
        let gap = pts.iter().map(|&(l, w)| c + eta * l - w).sum::<f64>() / pts.len() as f64;
        if best.map_or(true, |b| gap < b.2) {
            best = Some((eta, c, gap));
        }
    }
    let (eta, c, _) = best?;
    let pass = pts.iter().filter(|&&(l, w)| w <= c + eta * l + 1e-12 * c.abs().max(1.0)).count();
    Some(HolderFit {
        c: c.exp(),
        eta,
        pairs: pts.len(),
        pass_rate: pass as f64 / pts.len() as f64,
    })
}

impl KernelBoundReport {
    /// Fitted bound for one pair, `None` when its regime has no fit.
    pub fn bound(&self, t: f64, d: f64, h_star: f64) -> Option<f64> {
        match Regime::of(t, d, h_star, self.c_prime) {
            Regime::A => self.regime_a.map(|f| f.c / t * (-f.beta * d / h_star).exp()),
            Regime::B => self.regime_b.map(|f| f.c / t * (-f.beta * d * d / t).exp()),
        }
    }

    /// Fitted Hölder increment bound `(C″/t)(d/√t)^η`.
    pub fn increment_bound(&self, t: f64, d: f64) -> Option<f64> {
        self.holder.map(|h| h.c / t * (d / t.sqrt()).powf(h.eta))
    }
}

impl KernelTable {
    pub fn samples(&self) -> impl Iterator<Item = KernelSample> + '_ {
        self.entries.iter().map(move |e| KernelSample {
            t: self.t,
            y: self.y,
            x: e.x,
            d: e.d,
            h_star: e.h_star,
            k: e.k,
        })
    }

    /// Increments over graph edges with both endpoints tabulated, each edge
    /// once, as `(x, x′, increment)`.
    pub fn increment_pairs(&self, g: &WeightedGraph) -> Vec<(usize, usize, KernelIncrement)> {
        let mut at = std::collections::HashMap::with_capacity(self.entries.len());
        for e in &self.entries {
            at.insert(e.x, e.k);
        }
        let mut out = Vec::new();
        for e in &self.entries {
            for (x2, id) in g.neighbors(e.x) {
                if x2 <= e.x {
                    continue;
                }
                if let Some(k2) = at.get(&x2) {
                    out.push((
                        e.x,
                        x2,
                        KernelIncrement {
                            t: self.t,
                            d: g.edge(id).h,
                            diff: e.k - k2,
                        },
                    ));
                }
            }
        }
        out
    }

    pub fn increments(&self, g: &WeightedGraph) -> Vec<KernelIncrement> {
        self.increment_pairs(g).into_iter().map(|p| p.2).collect()
    }

    /// CSV rows (no header) with the bound evaluated from `fit`.
    pub fn csv_rows(&self, fit: &KernelBoundReport) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let regime = Regime::of(self.t, e.d, e.h_star, fit.c_prime);
            let bound = fit.bound(self.t, e.d, e.h_star);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                self.t,
                self.y,
                e.x,
                e.d,
                e.h_star,
                regime.label(),
                e.k.re,
                e.k.im,
                bound.map(|b| b.to_string()).unwrap_or_default()
            );
        }
        out
    }
}
