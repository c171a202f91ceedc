//! Convergence orders in `W^{1,2}` and `W^{1,p}` against a fine reference
//! solution, with the interpolated order
//! `θ = (1/p − 1/(2+ε)) / (1/2 − 1/(2+ε))`.

use meyers_core::galerkin::{prolongate, reconstruct, P1Field, PointLocator};
use meyers_core::Exec;

use super::{coefficient, domain, identity_verdict, level_h, mesh_at, run_cells, solve, SourceSpec};
use crate::config::{Config, Experiment};
use crate::table::{num, opt, Table};
use crate::verdict::{fmt_opt, slope, Verdict};
use crate::{Aborted, LabError};

pub const HEADER: &str =
    "experiment,p,eps_probe,theta,level,h,center,center_reference,err_w12,err_w1p,identity_defect";

pub const CENTER_TOL: f64 = 0.002;
pub const W12_ORDER: f64 = 0.9;
pub const THETA_TOL: f64 = 0.15;

pub fn theta(p: f64, eps: f64) -> f64 {
    let q = 1.0 / (2.0 + eps);
    (1.0 / p - q) / (0.5 - q)
}

pub fn run(cfg: &Config, exec: Exec) -> Result<(Table, Vec<Aborted>), LabError> {
    let poly = domain(cfg, "unit_square")?;
    let a = coefficient(cfg, &poly, "identity")?;
    let f = SourceSpec::parse(cfg, "constant -1")?;
    let levels = super::levels(cfg, &[2, 3, 4, 5])?;
    let reference: u32 = cfg.get("reference_level", 7)?;
    if levels.last().is_some_and(|&l| l >= reference) {
        return Err(LabError::Config("key 'reference_level': must exceed every level".into()));
    }
    let p: f64 = cfg.get("p", 2.2)?;
    let eps: f64 = cfg.get("eps_probe", 0.5)?;
    if !(eps > 0.0 && p > 2.0 && p < 2.0 + eps) {
        return Err(LabError::Config(format!(
            "key 'p': {p} is outside the admissible range (2, 2 + eps_probe) = (2, {})",
            2.0 + eps
        )));
    }
    let center_reference: Option<f64> = cfg.get_opt("center_reference")?;
    let vs = poly.vertices();
    let n = vs.len() as f64;
    let center = [vs.iter().map(|v| v[0]).sum::<f64>() / n, vs.iter().map(|v| v[1]).sum::<f64>() / n];
    let th = theta(p, eps);

    let mut all = levels.clone();
    all.push(reference);
    let (solved, mut aborted) = run_cells(exec, &all, |k| format!("level {k}"), |&k| {
        let tri = mesh_at(&poly, k)?;
        let s = solve(&tri, &a, f, exec)?;
        let field = reconstruct(&tri, &s.u)?;
        let c = field
            .evaluate(&PointLocator::new(&tri), center)
            .ok_or_else(|| LabError::Config("domain center is outside the mesh".into()))?;
        Ok((k, tri, s.u.into_values(), c, s.identity_defect))
    });
    let fine = solved.iter().find(|s| s.0 == reference);
    let coarse: Vec<usize> = (0..solved.len()).filter(|&i| solved[i].0 != reference).collect();
    let (errors, aborted_err) = match fine {
        Some(fine) => run_cells(
            exec,
            &coarse,
            |&i| format!("error level {}", solved[i].0),
            |&i| {
                let s = &solved[i];
                let up = prolongate(&s.1, &s.2, &fine.1)?;
                let d: Vec<f64> = up.iter().zip(&fine.2).map(|(a, b)| a - b).collect();
                let e = P1Field::interpolate(&fine.1, d)?;
                Ok((s.0, e.w1p_norm(2.0), e.w1p_norm(p)))
            },
        ),
        None => (Vec::new(), Vec::new()),
    };
    aborted.extend(aborted_err);

    let mut table = Table::new(Experiment::RateTheta, HEADER);
    for (k, _, _, c, defect) in &solved {
        let e = errors.iter().find(|e| e.0 == *k);
        table.push(vec![
            num(p),
            num(eps),
            num(th),
            k.to_string(),
            num(level_h(*k)),
            num(*c),
            opt(center_reference),
            opt(e.map(|e| e.1)),
            opt(e.map(|e| e.2)),
            num(*defect),
        ]);
    }
    Ok((table, aborted))
}

pub fn verdicts(table: &Table) -> Result<Vec<Verdict>, LabError> {
    if table.rows.is_empty() {
        return Ok(Vec::new());
    }
    let mut w12 = Vec::new();
    let mut w1p = Vec::new();
    let mut defects = Vec::new();
    // finest level that carries errors: (h, center, reference)
    let mut finest: Option<(f64, f64, Option<f64>)> = None;
    let mut th = 0.0;
    for r in table.records() {
        defects.push(r.f64("identity_defect")?);
        th = r.f64("theta")?;
        let h = r.f64("h")?;
        if let (Some(a), Some(b)) = (r.opt_f64("err_w12")?, r.opt_f64("err_w1p")?) {
            w12.push((h, a));
            w1p.push((h, b));
            if finest.map_or(true, |f| h < f.0) {
                finest = Some((h, r.f64("center")?, r.opt_f64("center_reference")?));
            }
        }
    }
    let mut out = Vec::new();
    if let Some((h, c, Some(reference))) = finest {
        let dev = (c - reference).abs();
        out.push(Verdict::new(
            "center value",
            dev <= CENTER_TOL,
            format!("u_h(center) = {c:.6} at h = {h}, reference {reference}, |diff| {dev:.2e} (<= {CENTER_TOL})"),
        ));
    }
    let s2 = slope(&w12);
    out.push(Verdict::new(
        "w12 order",
        s2.is_some_and(|s| s >= W12_ORDER),
        format!("fitted order {} (>= {W12_ORDER}) over {} levels", fmt_opt(s2), w12.len()),
    ));
    let sp = slope(&w1p);
    out.push(Verdict::new(
        "w1p order",
        sp.is_some_and(|s| (s - th).abs() <= THETA_TOL),
        format!("fitted order {} vs theta {th:.4} (within {THETA_TOL})", fmt_opt(sp)),
    ));
    out.push(identity_verdict(&defects));
    Ok(out)
}

#[cfg(test)]
mod tests {
    #[test]
    fn theta_formula() {
        assert!((super::theta(2.2, 0.5) - 6.0 / 11.0).abs() < 1e-14);
        assert!((super::theta(2.0, 0.5) - 1.0).abs() < 1e-14);
        assert!(super::theta(2.5, 0.5).abs() < 1e-14);
    }
}
