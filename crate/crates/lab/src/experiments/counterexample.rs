//! Galerkin solutions for the Meyers coefficient: bounded below the critical
//! exponent, blowing up above it.

use meyers_core::galerkin::{reconstruct, MeyersSolution};
use meyers_core::mesh::Polygon;
use meyers_core::Exec;

use super::{group_by, identity_verdict, level_h, levels, mesh_at, run_cells, solve, SourceSpec};
use crate::config::{Config, Experiment};
use crate::table::{num, Table};
use crate::verdict::{fmt_opt, slope, spread, Verdict};
use crate::{Aborted, LabError};

pub const HEADER: &str = "experiment,eps,p_c,p,level,h,vertices,w1p,identity_defect";

pub const BLOWUP_SLOPE: f64 = -0.2;
pub const BOUNDED_SPREAD: f64 = 1.5;

pub fn run(cfg: &Config, exec: Exec) -> Result<(Table, Vec<Aborted>), LabError> {
    let eps: f64 = cfg.get("eps", 0.5)?;
    let meyers = MeyersSolution::new(eps)?;
    let a = meyers_core::galerkin::CoefficientField::meyers(eps)?;
    let levels = levels(cfg, &[3, 4, 5, 6])?;
    let ps = super::exponents(cfg, "p", &[2.5, 6.0], |p| p >= 1.0 && p.is_finite(), "p >= 1")?;
    let poly = Polygon::symmetric_square();
    let f = SourceSpec::Meyers(meyers);
    let (cells, aborted) = run_cells(exec, &levels, |k| format!("level {k}"), |&k| {
        let tri = mesh_at(&poly, k)?;
        let s = solve(&tri, &a, f, exec)?;
        let field = reconstruct(&tri, &s.u)?;
        let norms: Vec<f64> = ps.iter().map(|&p| field.w1p_norm(p)).collect();
        Ok((k, tri.num_vertices(), norms, s.identity_defect))
    });
    let p_c = meyers.critical_exponent();
    let mut table = Table::new(Experiment::Counterexample, HEADER);
    for (pi, &p) in ps.iter().enumerate() {
        for (k, nv, norms, defect) in &cells {
            table.push(vec![
                num(eps),
                num(p_c),
                num(p),
                k.to_string(),
                num(level_h(*k)),
                nv.to_string(),
                num(norms[pi]),
                num(*defect),
            ]);
        }
    }
    Ok((table, aborted))
}

pub fn verdicts(table: &Table) -> Result<Vec<Verdict>, LabError> {
    let mut out = Vec::new();
    let mut defects = Vec::new();
    for (p_str, rows) in group_by(table, "p")? {
        let mut pairs = Vec::new();
        let mut p_c = 0.0;
        let p: f64 = rows[0].f64("p")?;
        for r in &rows {
            pairs.push((r.f64("h")?, r.f64("w1p")?));
            defects.push(r.f64("identity_defect")?);
            p_c = r.f64("p_c")?;
        }
        if p > p_c {
            let s = slope(&pairs);
            out.push(Verdict::new(
                format!("blow-up p={p_str}"),
                s.is_some_and(|s| s <= BLOWUP_SLOPE),
                format!("slope {} (<= {BLOWUP_SLOPE}) above p_c = {p_c}", fmt_opt(s)),
            ));
        } else if p < p_c {
            let values: Vec<f64> = pairs.iter().map(|q| q.1).collect();
            let sp = spread(&values);
            out.push(Verdict::new(
                format!("bounded p={p_str}"),
                values.len() >= 2 && sp <= BOUNDED_SPREAD,
                format!("max/min {sp:.4} (<= {BOUNDED_SPREAD}) below p_c = {p_c} over {} levels", values.len()),
            ));
        }
    }
    if !table.rows.is_empty() {
        out.push(identity_verdict(&defects));
    }
    Ok(out)
}
