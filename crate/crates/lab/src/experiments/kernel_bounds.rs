//! Heat kernel `K_t(x, y)` of a lattice box operator from the contour
//! integral, with the fitted Gaussian and Hölder bounds.

use meyers_core::elliptic::{
    build_operator, fit_kernel_bounds, kernel_table, ContourOptions, KernelBoundReport, KernelIncrement, KernelSample,
    Regime,
};
use meyers_core::graph::WeightedGraph;
use meyers_core::Exec;
use num_complex::Complex64;

use super::resolvent_sweep::edge_coefficients;
use super::run_cells;
use crate::config::{Config, Experiment};
use crate::table::{num, opt, Table};
use crate::verdict::Verdict;
use crate::{Aborted, LabError};

/// Row kinds: `pair` (one kernel value; `x2` empty), `increment`
/// (`K_t(x,y) − K_t(x2,y)` over an edge, in `k_re`/`k_im`; `h_star` and
/// `regime` empty), `oracle` (`Σ_x K_t(x,y) m(x)` in `k_re`/`k_im` and the
/// deviation from the matrix exponential).
pub const HEADER: &str = "experiment,kind,t,y,x,x2,d,h_star,regime,c_prime,k_re,k_im,bound_value,oracle_dev";

pub const ORACLE_TOL: f64 = 1e-8;

pub fn run(cfg: &Config, exec: Exec) -> Result<(Table, Vec<Aborted>), LabError> {
    let n: usize = cfg.get("box", 48)?;
    let times: Vec<f64> = cfg.list("times", &[0.5, 1.0, 2.0, 4.0, 8.0])?;
    if times.iter().any(|t| !(*t > 0.0)) {
        return Err(LabError::Config("key 'times': times must be positive".into()));
    }
    let coeffs: String = cfg.get("coefficients", "uniform".to_string())?;
    let amplitude: f64 = cfg.get("perturbation", 0.3)?;
    let seed: u64 = cfg.get("seed", 1)?;
    let c_prime: f64 = cfg.get("c_prime", 1.0)?;
    let margin: f64 = cfg.get("margin", 0.25)?;
    if !(0.0..0.5).contains(&margin) || n < 4 {
        return Err(LabError::Config("need margin in [0, 0.5) and box >= 4".into()));
    }
    let g = WeightedGraph::lattice_box(n, n)?;
    let op = build_operator(&g, &edge_coefficients(&coeffs, &g, amplitude, seed)?)?;
    let y = (n / 2) * n + n / 2;
    let lo = (margin * n as f64).floor() as usize;
    let window: Vec<usize> = (lo..n - lo)
        .flat_map(|j| (lo..n - lo).map(move |i| j * n + i))
        .collect();
    let opts = ContourOptions::default();

    let (tables, aborted) = run_cells(exec, &times, |t| format!("t = {t}"), |&t| {
        Ok(kernel_table(&op, t, y, Some(&window), &opts, exec)?)
    });
    let samples: Vec<KernelSample> = tables.iter().flat_map(|t| t.samples()).collect();
    let increments: Vec<_> = tables.iter().map(|t| t.increment_pairs(&g)).collect();
    let flat: Vec<KernelIncrement> = increments.iter().flatten().map(|p| p.2).collect();
    // a failed fit still leaves the rows; the verdicts report the failure
    let fit = fit_kernel_bounds(&samples, &flat, c_prime).ok();

    let mut table = Table::new(Experiment::KernelBounds, HEADER);
    for (kt, incs) in tables.iter().zip(&increments) {
        table.push(vec![
            "oracle".into(),
            num(kt.t),
            kt.y.to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            num(c_prime),
            num(kt.mass.re),
            num(kt.mass.im),
            String::new(),
            opt(kt.oracle_deviation),
        ]);
        for s in kt.samples() {
            table.push(vec![
                "pair".into(),
                num(s.t),
                s.y.to_string(),
                s.x.to_string(),
                String::new(),
                num(s.d),
                num(s.h_star),
                Regime::of(s.t, s.d, s.h_star, c_prime).label().into(),
                num(c_prime),
                num(s.k.re),
                num(s.k.im),
                opt(fit.as_ref().and_then(|f| f.bound(s.t, s.d, s.h_star))),
                String::new(),
            ]);
        }
        for (x, x2, inc) in incs {
            table.push(vec![
                "increment".into(),
                num(inc.t),
                kt.y.to_string(),
                x.to_string(),
                x2.to_string(),
                num(inc.d),
                String::new(),
                String::new(),
                num(c_prime),
                num(inc.diff.re),
                num(inc.diff.im),
                opt(fit.as_ref().and_then(|f| f.increment_bound(inc.t, inc.d))),
                String::new(),
            ]);
        }
    }
    Ok((table, aborted))
}

/// Refits the bounds from the rows.
pub fn refit(table: &Table) -> Result<(Vec<Option<f64>>, meyers_core::Result<KernelBoundReport>), LabError> {
    let mut samples = Vec::new();
    let mut increments = Vec::new();
    let mut oracle = Vec::new();
    let mut c_prime = 1.0;
    for r in table.records() {
        c_prime = r.f64("c_prime")?;
        let k = Complex64::new(r.f64("k_re")?, r.f64("k_im")?);
        match r.str("kind")? {
            "oracle" => oracle.push(r.opt_f64("oracle_dev")?),
            "pair" => samples.push(KernelSample {
                t: r.f64("t")?,
                y: r.f64("y")? as usize,
                x: r.f64("x")? as usize,
                d: r.f64("d")?,
                h_star: r.f64("h_star")?,
                k,
            }),
            "increment" => increments.push(KernelIncrement {
                t: r.f64("t")?,
                d: r.f64("d")?,
                diff: k,
            }),
            other => return Err(LabError::Csv(format!("unknown row kind '{other}'"))),
        }
    }
    Ok((oracle, fit_kernel_bounds(&samples, &increments, c_prime)))
}

pub fn verdicts(table: &Table) -> Result<Vec<Verdict>, LabError> {
    if table.rows.is_empty() {
        return Ok(Vec::new());
    }
    let (oracle, fit) = refit(table)?;
    let mut out = Vec::new();
    let worst = oracle.iter().map(|d| d.unwrap_or(f64::INFINITY)).fold(0.0f64, f64::max);
    out.push(Verdict::new(
        "kernel oracle",
        !oracle.is_empty() && worst <= ORACLE_TOL,
        format!("max deviation from the matrix exponential {worst:.3e} (<= {ORACLE_TOL:e}) over {} times", oracle.len()),
    ));
    match fit {
        Ok(fit) => {
            let b = fit.regime_b;
            out.push(Verdict::new(
                "gaussian bound",
                b.is_some_and(|b| b.beta > 0.0 && b.pass_rate == 1.0),
                match b {
                    Some(b) => format!(
                        "regime b: C = {:.4}, beta = {:.4}, {} pairs, pass rate {:.4}",
                        b.c, b.beta, b.pairs, b.pass_rate
                    ),
                    None => "no pairs in regime b".into(),
                },
            ));
            let h = fit.holder;
            out.push(Verdict::new(
                "holder increment",
                h.is_some_and(|h| h.eta > 0.0 && h.pass_rate == 1.0),
                match h {
                    Some(h) => format!(
                        "C = {:.4}, eta = {:.2}, {} increments, pass rate {:.4}",
                        h.c, h.eta, h.pairs, h.pass_rate
                    ),
                    None => "no increments".into(),
                },
            ));
        }
        Err(e) => {
            out.push(Verdict::new("gaussian bound", false, format!("fit failed: {e}")));
            out.push(Verdict::new("holder increment", false, format!("fit failed: {e}")));
        }
    }
    Ok(out)
}
