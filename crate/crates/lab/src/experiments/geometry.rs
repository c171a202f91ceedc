//! Doubling, volume and Poincaré constants of mesh graphs at a scale
//! proportional to the mesh size.

use meyers_core::graph::{geometry_report, WeightedGraph};
use meyers_core::Exec;

use super::{domain, level_h, levels, mesh_at, run_cells};
use crate::config::{Config, Experiment};
use crate::table::{num, Table};
use crate::verdict::{spread, Verdict};
use crate::{Aborted, LabError};

pub const HEADER: &str = "experiment,level,h,vertices,r0,c_d,c_l,c_p,doubling_dim,c_w,c_mu,max_degree";

pub const STABILITY: f64 = 2.0;

pub fn run(cfg: &Config, exec: Exec) -> Result<(Table, Vec<Aborted>), LabError> {
    let poly = domain(cfg, "unit_square")?;
    let levels = levels(cfg, &[3, 4, 5])?;
    let r0_cells: f64 = cfg.get("r0_cells", 8.0)?;
    let centers: usize = cfg.get("centers", 16)?;
    if !(r0_cells > 0.0) {
        return Err(LabError::Config("key 'r0_cells': must be positive".into()));
    }
    let (rows, aborted) = run_cells(exec, &levels, |k| format!("level {k}"), |&k| {
        let tri = mesh_at(&poly, k)?;
        let g = WeightedGraph::from_triangulation(&tri)?;
        let h = level_h(k);
        let r = geometry_report(&g, r0_cells * h, centers)?;
        Ok(vec![
            k.to_string(),
            num(h),
            g.num_vertices().to_string(),
            num(r.r0),
            num(r.c_d),
            num(r.c_l),
            num(r.c_p),
            num(r.d),
            num(g.weight_control()),
            num(g.measure_control()),
            g.max_degree().to_string(),
        ])
    });
    let mut table = Table::new(Experiment::Geometry, HEADER);
    for r in rows {
        table.push(r);
    }
    Ok((table, aborted))
}

pub fn verdicts(table: &Table) -> Result<Vec<Verdict>, LabError> {
    if table.rows.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (col, what) in [("c_d", "doubling"), ("c_l", "volume growth"), ("c_p", "poincare")] {
        let v: Vec<f64> = table.records().map(|r| r.f64(col)).collect::<Result<_, _>>()?;
        let sp = spread(&v);
        out.push(Verdict::new(
            format!("{what} stability"),
            v.len() >= 2 && sp < STABILITY,
            format!("{col} max/min {sp:.4} (< {STABILITY}) over {} levels", v.len()),
        ));
    }
    Ok(out)
}
