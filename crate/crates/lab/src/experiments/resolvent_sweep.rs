//! Resolvent bounds `‖(L+λ)⁻¹f‖_∞ ≲ |λ|^{−1/2}‖f‖₂` and their Hölder
//! counterpart on a lattice box, plus the scaling identity
//! `(L+λ)⁻¹f = (L_α+1)⁻¹(f/λ)` on the graph rescaled by `α = √λ`.

use std::f64::consts::PI;

use meyers_core::elliptic::{accretivity_angle, build_operator, resolvent_bound_sweep, EdgeCoefficients, SectorPoint};
use meyers_core::graph::WeightedGraph;
use meyers_core::Exec;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{group_by, run_cells};
use crate::config::{Config, Experiment};
use crate::table::{num, Table};
use crate::verdict::{fmt_opt, slope, spread, Verdict};
use crate::{Aborted, LabError};

pub const HEADER: &str = "experiment,kind,coefficients,ray,lambda_abs,eta,omega_hat,mu_sector,worst_vertex,u_inf,r_inf,holder_semi,r_eta,deviation";

pub const R_INF_SPREAD: f64 = 3.0;
pub const SLOPE_RANGE: (f64, f64) = (-0.6, -0.4);
pub const R_ETA_SPREAD: f64 = 4.0;
pub const SCALING_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Coefficients {
    Uniform,
    Perturbed,
}

impl Coefficients {
    fn name(self) -> &'static str {
        match self {
            Coefficients::Uniform => "uniform",
            Coefficients::Perturbed => "perturbed",
        }
    }

    fn parse(s: &str) -> Result<Self, LabError> {
        match s {
            "uniform" => Ok(Coefficients::Uniform),
            "perturbed" => Ok(Coefficients::Perturbed),
            _ => Err(LabError::Config(format!(
                "key 'coefficients': expected uniform or perturbed, got '{s}'"
            ))),
        }
    }

    fn build(self, g: &WeightedGraph, amplitude: f64, seed: u64) -> meyers_core::Result<EdgeCoefficients> {
        match self {
            Coefficients::Uniform => EdgeCoefficients::uniform(g, Complex64::new(1.0, 0.0)),
            Coefficients::Perturbed => EdgeCoefficients::perturbed(g, amplitude, seed),
        }
    }
}

pub(crate) fn coefficient_sets(cfg: &Config, default: &[&str]) -> Result<Vec<&'static str>, LabError> {
    let names: Vec<String> = cfg.list("coefficients", &default.iter().map(|s| s.to_string()).collect::<Vec<_>>())?;
    let mut out = Vec::new();
    for n in names {
        let c = Coefficients::parse(&n)?.name();
        if !out.contains(&c) {
            out.push(c);
        }
    }
    Ok(out)
}

pub(crate) fn edge_coefficients(name: &str, g: &WeightedGraph, amplitude: f64, seed: u64) -> Result<EdgeCoefficients, LabError> {
    Ok(Coefficients::parse(name)?.build(g, amplitude, seed)?)
}

/// Center of the box and four points around it, kept away from the edges.
pub(crate) fn probe_vertices(n: usize, count: usize) -> Vec<usize> {
    let c = n as i64 / 2;
    let q = (n as i64 / 4).max(1);
    let offsets = [(0, 0), (-q, -q), (q, -q / 2), (-q / 2, q), (q / 2, q / 2)];
    offsets
        .iter()
        .take(count.clamp(1, offsets.len()))
        .map(|&(di, dj)| {
            let i = (c + di).clamp(0, n as i64 - 1) as usize;
            let j = (c + dj).clamp(0, n as i64 - 1) as usize;
            j * n + i
        })
        .collect()
}

enum Cell {
    Bound { coeffs: &'static str, ray: f64 },
    Scaling { coeffs: &'static str },
}

pub fn run(cfg: &Config, exec: Exec) -> Result<(Table, Vec<Aborted>), LabError> {
    let n: usize = cfg.get("box", 64)?;
    if n < 4 {
        return Err(LabError::Config("key 'box': need at least 4 vertices per side".into()));
    }
    let sets = coefficient_sets(cfg, &["uniform", "perturbed"])?;
    let amplitude: f64 = cfg.get("perturbation", 0.3)?;
    let seed: u64 = cfg.get("seed", 1)?;
    let lambdas: Vec<f64> = cfg.list("lambdas", &[1.0, 10.0, 100.0, 1000.0])?;
    let rays: Vec<f64> = cfg.list("rays", &[0.0, 0.6])?;
    let p: f64 = cfg.get("p", 4.0)?;
    if !(p > 2.0) {
        return Err(LabError::Config(format!("key 'p': the Hölder exponent needs p > 2, got {p}")));
    }
    let eta = 1.0 - 2.0 / p;
    let probes = probe_vertices(n, cfg.get("probes", 5)?);
    let scaling: Vec<f64> = cfg.list("scaling_lambdas", &[4.0, 25.0, 100.0])?;
    let accretivity_probes: usize = cfg.get("accretivity_probes", 200)?;
    if lambdas.iter().chain(&scaling).any(|l| !(*l > 0.0)) {
        return Err(LabError::Config("λ moduli must be positive".into()));
    }

    let g = WeightedGraph::lattice_box(n, n)?;
    let mut cells = Vec::new();
    for &coeffs in &sets {
        for &ray in &rays {
            cells.push(Cell::Bound { coeffs, ray });
        }
        cells.push(Cell::Scaling { coeffs });
    }
    let label = |c: &Cell| match c {
        Cell::Bound { coeffs, ray } => format!("{coeffs} ray {ray}pi"),
        Cell::Scaling { coeffs } => format!("{coeffs} scaling"),
    };
    let (rows, aborted) = run_cells(exec, &cells, label, |cell| {
        let mut rows = Vec::new();
        match *cell {
            Cell::Bound { coeffs, ray } => {
                let op = build_operator(&g, &edge_coefficients(coeffs, &g, amplitude, seed)?)?;
                let acc = accretivity_angle(&op, accretivity_probes, seed);
                let phase = Complex64::from_polar(1.0, ray * PI);
                let ls = lambdas
                    .iter()
                    .map(|&l| SectorPoint::new(phase * l, acc.omega_hat).map(|s| s.lambda))
                    .collect::<meyers_core::Result<Vec<_>>>()?;
                let sweep = resolvent_bound_sweep(&op, &ls, &probes, eta, exec)?;
                for s in &sweep.samples {
                    rows.push(vec![
                        "bound".to_string(),
                        coeffs.to_string(),
                        num(ray),
                        num(s.lambda.norm()),
                        num(eta),
                        num(acc.omega_hat),
                        num(acc.mu_sector),
                        s.worst_vertex.to_string(),
                        num(s.u_inf),
                        num(s.r_inf),
                        num(s.holder_semi),
                        num(s.r_eta),
                        String::new(),
                    ]);
                }
            }
            Cell::Scaling { coeffs } => {
                let c = edge_coefficients(coeffs, &g, amplitude, seed)?;
                let op = build_operator(&g, &c)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let f: Vec<Complex64> = (0..g.num_vertices())
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                for &l in &scaling {
                    let u = op.resolvent_solve(Complex64::new(l, 0.0), &f)?;
                    let scaled = build_operator(&g.rescale(l.sqrt())?, &c)?;
                    let data: Vec<Complex64> = f.iter().map(|z| z / l).collect();
                    let v = scaled.resolvent_solve(Complex64::new(1.0, 0.0), &data)?;
                    let dev = u.iter().zip(&v).map(|(a, b)| (a - b).norm()).fold(0.0f64, f64::max);
                    let mut row = vec![String::new(); 13];
                    row[0] = "scaling".into();
                    row[1] = coeffs.into();
                    row[2] = num(0.0);
                    row[3] = num(l);
                    row[12] = num(dev);
                    rows.push(row);
                }
            }
        }
        Ok(rows)
    });
    let mut table = Table::new(Experiment::ResolventSweep, HEADER);
    for r in rows.into_iter().flatten() {
        table.push(r);
    }
    Ok((table, aborted))
}

pub fn verdicts(table: &Table) -> Result<Vec<Verdict>, LabError> {
    let mut out = Vec::new();
    let mut deviations = Vec::new();
    let mut bound_groups: Vec<(String, Vec<crate::table::Record<'_>>)> = Vec::new();
    for (kind, rows) in group_by(table, "kind")? {
        match kind.as_str() {
            "scaling" => {
                for r in &rows {
                    deviations.push(r.f64("deviation")?);
                }
            }
            "bound" => {
                for r in rows {
                    let key = format!("{} ray={}pi", r.str("coefficients")?, r.str("ray")?);
                    match bound_groups.iter_mut().find(|g| g.0 == key) {
                        Some(g) => g.1.push(r),
                        None => bound_groups.push((key, vec![r])),
                    }
                }
            }
            other => return Err(LabError::Csv(format!("unknown row kind '{other}'"))),
        }
    }
    for (key, rows) in &bound_groups {
        let mut r_inf = Vec::new();
        let mut r_eta = Vec::new();
        let mut u_inf = Vec::new();
        let mut in_sector = true;
        for r in rows {
            r_inf.push(r.f64("r_inf")?);
            r_eta.push(r.f64("r_eta")?);
            u_inf.push((r.f64("lambda_abs")?, r.f64("u_inf")?));
            in_sector &= (r.f64("ray")? * std::f64::consts::PI).abs() < r.f64("mu_sector")?;
        }
        let (a, b) = (spread(&r_inf), spread(&r_eta));
        let s = slope(&u_inf);
        out.push(Verdict::new(
            format!("r_inf {key}"),
            r_inf.len() >= 2 && a <= R_INF_SPREAD,
            format!("max/min {a:.4} (<= {R_INF_SPREAD}) over {} values of λ", r_inf.len()),
        ));
        out.push(Verdict::new(
            format!("u_inf slope {key}"),
            s.is_some_and(|s| (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&s)),
            format!("slope {} (in [{}, {}])", fmt_opt(s), SLOPE_RANGE.0, SLOPE_RANGE.1),
        ));
        out.push(Verdict::new(
            format!("r_eta {key}"),
            r_eta.len() >= 2 && b <= R_ETA_SPREAD,
            format!("max/min {b:.4} (<= {R_ETA_SPREAD})"),
        ));
        out.push(Verdict::new(
            format!("sector {key}"),
            in_sector,
            "every λ inside the sector of the estimated accretivity angle".to_string(),
        ));
    }
    if !deviations.is_empty() {
        let worst = deviations.iter().copied().fold(0.0f64, f64::max);
        out.push(Verdict::new(
            "scaling identity",
            deviations.iter().all(|d| *d <= SCALING_TOL),
            format!("max componentwise deviation {worst:.3e} (<= {SCALING_TOL:e}) over {} solves", deviations.len()),
        ));
    }
    Ok(out)
}
