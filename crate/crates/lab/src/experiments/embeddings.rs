//! Sobolev and Hölder embedding ratios on mesh graphs, and the ratios of
//! discrete norms to the norms of the P1 reconstruction.

use meyers_core::galerkin::reconstruct;
use meyers_core::graph::WeightedGraph;
use meyers_core::mesh::{structured_rectangle, Polygon};
use meyers_core::spaces::{embedding_report, gradient_length, holder_seminorm, lp_norm, VertexFunction};
use meyers_core::Exec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{group_by, run_cells};
use crate::config::{Config, Experiment};
use crate::table::{num, Table};
use crate::verdict::{spread, Verdict};
use crate::{Aborted, LabError};

/// Row kinds: `sobolev` (`max ‖f‖_{p*}/‖∇f‖_p`, exponent `p*`), `holder`
/// (`max ‖f‖_{C^η}/‖f‖_{W^{1,p}}`, exponent `η`), and the graph/continuum
/// ratios `lp`, `grad` and `holder_p1` over random zero-boundary functions.
pub const HEADER: &str = "experiment,kind,n,h,p,exponent,ratio_min,ratio_max";

pub const EMBEDDING_SPREAD: f64 = 2.0;
pub const BRACKET_CHANGE: f64 = 0.5;

#[derive(Clone, Copy)]
enum Cell {
    Embedding { n: usize },
    Equivalence { n: usize, p: f64 },
}

/// Hölder exponent paired with `p`: `1 − 2/p` above 2, `1/2` at `p = 2`.
pub fn equivalence_eta(p: f64) -> f64 {
    if p > 2.0 {
        1.0 - 2.0 / p
    } else {
        0.5
    }
}

fn mesh_graph(n: usize) -> Result<(meyers_core::mesh::Triangulation, WeightedGraph), LabError> {
    let tri = structured_rectangle(&Polygon::unit_square(), n, n);
    let g = WeightedGraph::from_triangulation(&tri)?;
    Ok((tri, g))
}

pub fn run(cfg: &Config, exec: Exec) -> Result<(Table, Vec<Aborted>), LabError> {
    let mut sizes: Vec<usize> = cfg.list("sizes", &[8, 12, 16, 24])?;
    let sobolev_p: f64 = cfg.get("sobolev_p", 1.5)?;
    let holder_p: f64 = cfg.get("holder_p", 4.0)?;
    if !(1.0..2.0).contains(&sobolev_p) || !(holder_p > 2.0) {
        return Err(LabError::Config("need 1 <= sobolev_p < 2 < holder_p".into()));
    }
    let trials: usize = cfg.get("trials", 10)?;
    let seed: u64 = cfg.get("seed", 1)?;
    let mut eq_sizes: Vec<usize> = cfg.list("equivalence_sizes", &[16, 32])?;
    let eq_p = super::exponents(cfg, "equivalence_p", &[2.0, 2.2, 4.0], |p| p >= 1.0 && p.is_finite(), "p >= 1")?;
    let samples: usize = cfg.get("samples", 20)?;
    if sizes.iter().chain(&eq_sizes).any(|&n| n < 2) || samples == 0 {
        return Err(LabError::Config("sizes must be >= 2 and samples positive".into()));
    }
    sizes.sort_unstable();
    sizes.dedup();
    eq_sizes.sort_unstable();
    eq_sizes.dedup();

    let mut cells: Vec<Cell> = sizes.iter().map(|&n| Cell::Embedding { n }).collect();
    for &p in &eq_p {
        for &n in &eq_sizes {
            cells.push(Cell::Equivalence { n, p });
        }
    }
    let label = |c: &Cell| match c {
        Cell::Embedding { n } => format!("embedding n = {n}"),
        Cell::Equivalence { n, p } => format!("equivalence n = {n}, p = {p}"),
    };
    let (rows, aborted) = run_cells(exec, &cells, label, |cell| -> Result<Vec<Vec<String>>, LabError> {
        match *cell {
            Cell::Embedding { n } => {
                let (_, g) = mesh_graph(n)?;
                let h = 1.0 / n as f64;
                let s = embedding_report(&g, sobolev_p, trials, seed)?;
                let t = embedding_report(&g, holder_p, trials, seed)?;
                let row = |kind: &str, p: f64, e: Option<f64>, v: Option<f64>| {
                    vec![kind.into(), n.to_string(), num(h), num(p), num(e.unwrap_or(f64::NAN)), String::new(), num(v.unwrap_or(f64::NAN))]
                };
                Ok(vec![
                    row("sobolev", sobolev_p, s.p_star, s.sobolev_ratio_max),
                    row("holder", holder_p, t.eta, t.holder_ratio_max),
                ])
            }
            Cell::Equivalence { n, p } => {
                let (tri, g) = mesh_graph(n)?;
                let eta = equivalence_eta(p);
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
                let mut ratios = [(f64::INFINITY, 0.0f64); 3];
                for _ in 0..samples {
                    let u = VertexFunction::from_values((0..g.num_vertices()).map(|_| rng.gen_range(-1.0..1.0)).collect())
                        .zero_boundary(&g);
                    let field = reconstruct(&tri, &u)?;
                    let graph_holder = lp_norm(&g, &u, f64::INFINITY) + holder_seminorm(&g, &u, eta)?.value;
                    let values = [
                        lp_norm(&g, &u, p) / field.lp_norm(p).value,
                        lp_norm(&g, &gradient_length(&g, &u), p) / field.grad_lp_norm(p),
                        graph_holder / field.holder(eta, Exec::Sequential)?.norm,
                    ];
                    for (r, v) in ratios.iter_mut().zip(values) {
                        *r = (r.0.min(v), r.1.max(v));
                    }
                }
                let h = 1.0 / n as f64;
                Ok(["lp", "grad", "holder_p1"]
                    .iter()
                    .zip(ratios)
                    .map(|(kind, (lo, hi))| {
                        let e = if *kind == "holder_p1" { eta } else { 0.0 };
                        vec![kind.to_string(), n.to_string(), num(h), num(p), num(e), num(lo), num(hi)]
                    })
                    .collect())
            }
        }
    });
    let mut table = Table::new(Experiment::Embeddings, HEADER);
    for r in rows.into_iter().flatten() {
        table.push(r);
    }
    Ok((table, aborted))
}

pub fn verdicts(table: &Table) -> Result<Vec<Verdict>, LabError> {
    let mut out = Vec::new();
    for (kind, rows) in group_by(table, "kind")? {
        match kind.as_str() {
            "sobolev" | "holder" => {
                let values: Vec<f64> = rows.iter().map(|r| r.f64("ratio_max")).collect::<Result<_, _>>()?;
                let sp = spread(&values);
                out.push(Verdict::new(
                    format!("{kind} embedding"),
                    values.len() >= 2 && sp < EMBEDDING_SPREAD,
                    format!("max ratio varies by {sp:.4} (< {EMBEDDING_SPREAD}) over {} sizes", values.len()),
                ));
            }
            "lp" | "grad" | "holder_p1" => {
                let mut by_p: Vec<(String, Vec<(f64, f64, f64)>)> = Vec::new();
                for r in &rows {
                    let entry = (r.f64("n")?, r.f64("ratio_min")?, r.f64("ratio_max")?);
                    let p = r.str("p")?.to_string();
                    match by_p.iter_mut().find(|g| g.0 == p) {
                        Some(g) => g.1.push(entry),
                        None => by_p.push((p, vec![entry])),
                    }
                }
                for (p, mut brackets) in by_p {
                    brackets.sort_by(|a, b| a.0.total_cmp(&b.0));
                    let change = brackets
                        .windows(2)
                        .map(|w| ((w[1].1 / w[0].1 - 1.0).abs()).max((w[1].2 / w[0].2 - 1.0).abs()))
                        .fold(0.0f64, f64::max);
                    let text = brackets
                        .iter()
                        .map(|b| format!("n={}: [{:.4}, {:.4}]", b.0, b.1, b.2))
                        .collect::<Vec<_>>()
                        .join(", ");
                    out.push(Verdict::new(
                        format!("{kind} equivalence p={p}"),
                        brackets.len() >= 2 && change < BRACKET_CHANGE,
                        format!("largest endpoint change {change:.4} (< {BRACKET_CHANGE}); {text}"),
                    ));
                }
            }
            other => return Err(LabError::Csv(format!("unknown row kind '{other}'"))),
        }
    }
    Ok(out)
}
