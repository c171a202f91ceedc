//! `C^{0,η}` norms of Galerkin solutions and of differences between
//! consecutive levels, `η = 1 − 2/p`.

use meyers_core::galerkin::{prolongate, reconstruct, P1Field};
use meyers_core::Exec;

use super::{coefficient, domain, identity_verdict, level_h, levels, mesh_at, run_cells, solve, SourceSpec};
use crate::config::{Config, Experiment};
use crate::table::{num, opt, Table};
use crate::verdict::{spread, Verdict};
use crate::{Aborted, LabError};

pub const HEADER: &str =
    "experiment,p,eta,level,h,vertices,holder_norm,holder_semi,audit_ratio,cauchy_diff,identity_defect";

pub const SPREAD_TOL: f64 = 2.0;
/// a randomized audit may exceed the vertex supremum by at most 1%
pub const AUDIT_TOL: f64 = 1.01;

pub fn run(cfg: &Config, exec: Exec) -> Result<(Table, Vec<Aborted>), LabError> {
    let poly = domain(cfg, "unit_square")?;
    let a = coefficient(cfg, &poly, "checkerboard 1 4 4")?;
    let f = SourceSpec::parse(cfg, "constant 1")?;
    let levels = levels(cfg, &[3, 4, 5, 6])?;
    let p: f64 = cfg.get("p", 2.2)?;
    if !(p > 2.0 && p.is_finite()) {
        return Err(LabError::Config(format!("key 'p': {p} is outside the admissible range p > 2")));
    }
    let eta = 1.0 - 2.0 / p;
    let audit_samples: usize = cfg.get("audit_samples", 2000)?;
    let seed: u64 = cfg.get("seed", 1)?;

    let (solved, mut aborted) = run_cells(exec, &levels, |k| format!("level {k}"), |&k| {
        let tri = mesh_at(&poly, k)?;
        let s = solve(&tri, &a, f, exec)?;
        let field = reconstruct(&tri, &s.u)?;
        let holder = field.holder(eta, exec)?;
        let audit = field.holder_audit(eta, audit_samples, seed);
        let ratio = if holder.seminorm > 0.0 { audit / holder.seminorm } else { 0.0 };
        Ok((k, tri, s.u.into_values(), holder, ratio, s.identity_defect))
    });

    // differences between consecutive solved levels, on the finer mesh
    let pairs: Vec<usize> = (1..solved.len())
        .filter(|&i| solved[i].0 == solved[i - 1].0 + 1)
        .collect();
    let (diffs, aborted_pairs) = run_cells(
        exec,
        &pairs,
        |&i| format!("levels {}-{}", solved[i - 1].0, solved[i].0),
        |&i| {
            let (coarse, fine) = (&solved[i - 1], &solved[i]);
            let up = prolongate(&coarse.1, &coarse.2, &fine.1)?;
            let d: Vec<f64> = up.iter().zip(&fine.2).map(|(a, b)| a - b).collect();
            let h = P1Field::interpolate(&fine.1, d)?.holder(eta, exec)?;
            Ok((coarse.0, h.norm))
        },
    );
    aborted.extend(aborted_pairs);

    let mut table = Table::new(Experiment::HolderConvergence, HEADER);
    for (k, tri, _, holder, ratio, defect) in &solved {
        let cauchy = diffs.iter().find(|d| d.0 == *k).map(|d| d.1);
        table.push(vec![
            num(p),
            num(eta),
            k.to_string(),
            num(level_h(*k)),
            tri.num_vertices().to_string(),
            num(holder.norm),
            num(holder.seminorm),
            num(*ratio),
            opt(cauchy),
            num(*defect),
        ]);
    }
    Ok((table, aborted))
}

pub fn verdicts(table: &Table) -> Result<Vec<Verdict>, LabError> {
    if table.rows.is_empty() {
        return Ok(Vec::new());
    }
    let mut norms = Vec::new();
    let mut cauchy = Vec::new();
    let mut audits = Vec::new();
    let mut defects = Vec::new();
    for r in table.records() {
        norms.push(r.f64("holder_norm")?);
        if let Some(c) = r.opt_f64("cauchy_diff")? {
            cauchy.push(c);
        }
        audits.push(r.f64("audit_ratio")?);
        defects.push(r.f64("identity_defect")?);
    }
    let sp = spread(&norms);
    let decreasing = cauchy.len() >= 2 && cauchy.windows(2).all(|w| w[1] < w[0]);
    let worst_audit = audits.iter().copied().fold(0.0f64, f64::max);
    let list = cauchy.iter().map(|c| format!("{c:.4e}")).collect::<Vec<_>>().join(" > ");
    Ok(vec![
        Verdict::new(
            "holder stability",
            norms.len() >= 2 && sp <= SPREAD_TOL,
            format!("max/min {sp:.4} (<= {SPREAD_TOL}) over {} levels", norms.len()),
        ),
        Verdict::new(
            "cauchy decrease",
            decreasing,
            format!("{} level pairs: {list}", cauchy.len()),
        ),
        Verdict::new(
            "holder audit",
            worst_audit <= AUDIT_TOL,
            format!("largest audited/vertex seminorm {worst_audit:.5} (<= {AUDIT_TOL})"),
        ),
        identity_verdict(&defects),
    ])
}
