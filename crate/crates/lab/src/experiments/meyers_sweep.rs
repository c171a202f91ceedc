//! `‖u_h‖_{W^{1,p}} / ‖f‖_{L²}` across mesh levels.

use meyers_core::galerkin::{reconstruct, P1Field};
use meyers_core::Exec;

use super::{coefficient, domain, group_by, identity_verdict, level_h, levels, mesh_at, run_cells, solve, SourceSpec};
use crate::config::{Config, Experiment};
use crate::table::{num, Table};
use crate::verdict::{fmt_opt, slope, spread, Verdict};
use crate::{Aborted, LabError};

pub const HEADER: &str = "experiment,p,level,h,vertices,w1p,f_l2,ratio,identity_defect";

pub const SLOPE_TOL: f64 = 0.05;
pub const SPREAD_TOL: f64 = 1.3;

pub fn run(cfg: &Config, exec: Exec) -> Result<(Table, Vec<Aborted>), LabError> {
    let poly = domain(cfg, "unit_square")?;
    let a = coefficient(cfg, &poly, "checkerboard 1 4 4")?;
    let f = SourceSpec::parse(cfg, "constant 1")?;
    let levels = levels(cfg, &[3, 4, 5, 6])?;
    let ps = super::exponents(cfg, "p", &[2.2], |p| p > 2.0 && p.is_finite(), "p > 2")?;
    let (cells, aborted) = run_cells(exec, &levels, |k| format!("level {k}"), |&k| {
        let tri = mesh_at(&poly, k)?;
        let s = solve(&tri, &a, f, exec)?;
        let field = reconstruct(&tri, &s.u)?;
        let samples = tri.points().iter().map(|&p| f.eval(p)).collect();
        let f_l2 = P1Field::interpolate(&tri, samples)?.lp_norm(2.0).value;
        let norms: Vec<f64> = ps.iter().map(|&p| field.w1p_norm(p)).collect();
        Ok((k, tri.num_vertices(), norms, f_l2, s.identity_defect))
    });
    let mut table = Table::new(Experiment::MeyersSweep, HEADER);
    for (pi, &p) in ps.iter().enumerate() {
        for (k, nv, norms, f_l2, defect) in &cells {
            table.push(vec![
                num(p),
                k.to_string(),
                num(level_h(*k)),
                nv.to_string(),
                num(norms[pi]),
                num(*f_l2),
                num(norms[pi] / f_l2),
                num(*defect),
            ]);
        }
    }
    Ok((table, aborted))
}

pub fn verdicts(table: &Table) -> Result<Vec<Verdict>, LabError> {
    let mut out = Vec::new();
    let mut defects = Vec::new();
    for (p, rows) in group_by(table, "p")? {
        let mut pairs = Vec::new();
        for r in &rows {
            pairs.push((r.f64("h")?, r.f64("ratio")?));
            defects.push(r.f64("identity_defect")?);
        }
        let ratios: Vec<f64> = pairs.iter().map(|q| q.1).collect();
        let s = slope(&pairs);
        let sp = spread(&ratios);
        out.push(Verdict::new(
            format!("uniform bound p={p}"),
            s.is_some_and(|s| s.abs() <= SLOPE_TOL) && sp <= SPREAD_TOL,
            format!(
                "slope {} (|.| <= {SLOPE_TOL}), max/min {sp:.4} (<= {SPREAD_TOL}) over {} levels",
                fmt_opt(s),
                pairs.len()
            ),
        ));
    }
    if !table.rows.is_empty() {
        out.push(identity_verdict(&defects));
    }
    Ok(out)
}
