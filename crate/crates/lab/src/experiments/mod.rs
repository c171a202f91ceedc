//! The eight experiments. Each module has a fixed CSV `HEADER`, a `run`
//! producing rows and a `verdicts` function that reads rows only.

mod counterexample;
mod embeddings;
mod geometry;
mod holder_convergence;
mod kernel_bounds;
mod meyers_sweep;
mod rate_theta;
mod resolvent_sweep;

use meyers_core::galerkin::{CoefficientField, MeyersSolution, P1System, Source};
use meyers_core::mesh::{structured_rectangle, triangulate, Point, Polygon, Triangulation};
use meyers_core::spaces::VertexFunction;
use meyers_core::Exec;

use crate::config::{Config, Experiment};
use crate::table::Table;
use crate::verdict::Verdict;
use crate::{Aborted, LabError};

pub fn header(e: Experiment) -> &'static str {
    match e {
        Experiment::MeyersSweep => meyers_sweep::HEADER,
        Experiment::Counterexample => counterexample::HEADER,
        Experiment::HolderConvergence => holder_convergence::HEADER,
        Experiment::RateTheta => rate_theta::HEADER,
        Experiment::ResolventSweep => resolvent_sweep::HEADER,
        Experiment::KernelBounds => kernel_bounds::HEADER,
        Experiment::Embeddings => embeddings::HEADER,
        Experiment::Geometry => geometry::HEADER,
    }
}

pub(crate) fn run(cfg: &Config, exec: Exec) -> Result<(Table, Vec<Aborted>), LabError> {
    match cfg.experiment {
        Experiment::MeyersSweep => meyers_sweep::run(cfg, exec),
        Experiment::Counterexample => counterexample::run(cfg, exec),
        Experiment::HolderConvergence => holder_convergence::run(cfg, exec),
        Experiment::RateTheta => rate_theta::run(cfg, exec),
        Experiment::ResolventSweep => resolvent_sweep::run(cfg, exec),
        Experiment::KernelBounds => kernel_bounds::run(cfg, exec),
        Experiment::Embeddings => embeddings::run(cfg, exec),
        Experiment::Geometry => geometry::run(cfg, exec),
    }
}

/// Verdicts recomputed from the rows of `table`.
pub fn verdicts(table: &Table) -> Result<Vec<Verdict>, LabError> {
    match table.experiment {
        Experiment::MeyersSweep => meyers_sweep::verdicts(table),
        Experiment::Counterexample => counterexample::verdicts(table),
        Experiment::HolderConvergence => holder_convergence::verdicts(table),
        Experiment::RateTheta => rate_theta::verdicts(table),
        Experiment::ResolventSweep => resolvent_sweep::verdicts(table),
        Experiment::KernelBounds => kernel_bounds::verdicts(table),
        Experiment::Embeddings => embeddings::verdicts(table),
        Experiment::Geometry => geometry::verdicts(table),
    }
}

/// Runs `cells` (already in sorted key order) through `exec`; failures are
/// collected instead of stopping the sweep.
pub(crate) fn run_cells<C, R, F>(exec: Exec, cells: &[C], label: impl Fn(&C) -> String, f: F) -> (Vec<R>, Vec<Aborted>)
where
    C: Sync,
    R: Send,
    F: Fn(&C) -> Result<R, LabError> + Sync + Send,
{
    let results = exec.map(cells.len(), |i| f(&cells[i]));
    let mut ok = Vec::new();
    let mut aborted = Vec::new();
    for (c, r) in cells.iter().zip(results) {
        match r {
            Ok(r) => ok.push(r),
            Err(e) => aborted.push(Aborted {
                cell: label(c),
                error: e.to_string(),
            }),
        }
    }
    (ok, aborted)
}

fn bad(key: &str, msg: impl std::fmt::Display) -> LabError {
    LabError::Config(format!("key '{key}': {msg}"))
}

fn word_f64(key: &str, words: &[String], i: usize) -> Result<f64, LabError> {
    words
        .get(i)
        .ok_or_else(|| bad(key, format!("expected {} numbers after '{}'", i, words[0])))?
        .parse()
        .map_err(|_| bad(key, format!("'{}' is not a number", words[i])))
}

fn expect_len(key: &str, words: &[String], n: usize) -> Result<(), LabError> {
    if words.len() == n {
        Ok(())
    } else {
        Err(bad(key, format!("'{}' takes {} arguments", words[0], n - 1)))
    }
}

/// `unit_square`, `symmetric_square` or `rectangle x0 y0 x1 y1`.
pub(crate) fn domain(cfg: &Config, default: &str) -> Result<Polygon, LabError> {
    let w = cfg.words("domain", default);
    match w.first().map(String::as_str) {
        Some("unit_square") => expect_len("domain", &w, 1).map(|_| Polygon::unit_square()),
        Some("symmetric_square") => expect_len("domain", &w, 1).map(|_| Polygon::symmetric_square()),
        Some("rectangle") => {
            expect_len("domain", &w, 5)?;
            let v: Vec<f64> = (1..5).map(|i| word_f64("domain", &w, i)).collect::<Result<_, _>>()?;
            Ok(Polygon::rectangle(v[0], v[1], v[2], v[3])?)
        }
        _ => Err(bad("domain", "expected unit_square, symmetric_square or rectangle x0 y0 x1 y1")),
    }
}

/// `identity`, `checkerboard low high cells`, `meyers eps`, `smooth` or
/// `constant a11 a12 a21 a22`.
pub(crate) fn coefficient(cfg: &Config, poly: &Polygon, default: &str) -> Result<CoefficientField, LabError> {
    let key = "coefficient";
    let w = cfg.words(key, default);
    match w.first().map(String::as_str) {
        Some("identity") => expect_len(key, &w, 1).map(|_| CoefficientField::identity()),
        Some("smooth") => expect_len(key, &w, 1).map(|_| CoefficientField::smooth()),
        Some("checkerboard") => {
            expect_len(key, &w, 4)?;
            let cells = w[3].parse().map_err(|_| bad(key, "cells must be a positive integer"))?;
            let rect = poly
                .as_rectangle()
                .ok_or_else(|| bad(key, "checkerboard needs a rectangular domain"))?;
            Ok(CoefficientField::checkerboard(
                word_f64(key, &w, 1)?,
                word_f64(key, &w, 2)?,
                cells,
                rect,
            )?)
        }
        Some("meyers") => {
            expect_len(key, &w, 2)?;
            Ok(CoefficientField::meyers(word_f64(key, &w, 1)?)?)
        }
        Some("constant") => {
            expect_len(key, &w, 5)?;
            let v: Vec<f64> = (1..5).map(|i| word_f64(key, &w, i)).collect::<Result<_, _>>()?;
            Ok(CoefficientField::constant([[v[0], v[1]], [v[2], v[3]]])?)
        }
        _ => Err(bad(key, "expected identity, checkerboard, meyers, smooth or constant")),
    }
}

/// Right-hand side `f` of `div(A∇u) = f`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum SourceSpec {
    Constant(f64),
    /// the source whose solution is the Meyers function
    Meyers(MeyersSolution),
}

impl SourceSpec {
    pub fn parse(cfg: &Config, default: &str) -> Result<SourceSpec, LabError> {
        let key = "source";
        let w = cfg.words(key, default);
        match w.first().map(String::as_str) {
            Some("constant") => {
                expect_len(key, &w, 2)?;
                Ok(SourceSpec::Constant(word_f64(key, &w, 1)?))
            }
            Some("meyers") => {
                expect_len(key, &w, 2)?;
                Ok(SourceSpec::Meyers(MeyersSolution::new(word_f64(key, &w, 1)?)?))
            }
            _ => Err(bad(key, "expected 'constant c' or 'meyers eps'")),
        }
    }

    pub fn eval(&self, p: Point) -> f64 {
        match self {
            SourceSpec::Constant(c) => *c,
            SourceSpec::Meyers(m) => m.source(p),
        }
    }
}

/// Mesh spacing of level `k`.
pub(crate) fn level_h(level: u32) -> f64 {
    (-(level as f64)).exp2()
}

/// Structured union-jack mesh with grid spacing `2^−level` on rectangles,
/// the general mesher elsewhere.
pub(crate) fn mesh_at(poly: &Polygon, level: u32) -> Result<Triangulation, LabError> {
    let h = level_h(level);
    match poly.as_rectangle() {
        Some((x0, y0, x1, y1)) => {
            let (nx, ny) = ((x1 - x0) / h, (y1 - y0) / h);
            if (nx - nx.round()).abs() > 1e-9 || (ny - ny.round()).abs() > 1e-9 || nx < 1.0 || ny < 1.0 {
                return Err(LabError::Config(format!(
                    "level {level}: the domain sides are not multiples of h = {h}"
                )));
            }
            Ok(structured_rectangle(poly, nx.round() as usize, ny.round() as usize))
        }
        None => Ok(triangulate(poly, h)?),
    }
}

pub(crate) struct Solved {
    pub u: VertexFunction<f64>,
    pub identity_defect: f64,
}

pub(crate) fn solve(tri: &Triangulation, a: &CoefficientField, f: SourceSpec, exec: Exec) -> Result<Solved, LabError> {
    let density = move |p: Point| f.eval(p);
    let system = P1System::assemble(tri, a, exec)?.with_source(Source::Density(&density))?;
    let u = system.solve()?.u;
    let identity_defect = system.identity_defect(&u);
    Ok(Solved {
        u,
        identity_defect,
    })
}

pub(crate) fn levels(cfg: &Config, default: &[u32]) -> Result<Vec<u32>, LabError> {
    let mut l = cfg.list("levels", default)?;
    l.sort_unstable();
    l.dedup();
    if l.iter().any(|&k| k > 12) {
        return Err(bad("levels", "levels above 12 are out of reach"));
    }
    Ok(l)
}

/// Sorted, deduplicated exponent list with each value checked by `ok`.
pub(crate) fn exponents(cfg: &Config, key: &str, default: &[f64], ok: impl Fn(f64) -> bool, what: &str) -> Result<Vec<f64>, LabError> {
    let mut v: Vec<f64> = cfg.list(key, default)?;
    if let Some(p) = v.iter().find(|&&p| !ok(p)) {
        return Err(bad(key, format!("{p} is outside the admissible range {what}")));
    }
    v.sort_by(f64::total_cmp);
    v.dedup();
    Ok(v)
}

/// Identity-defect verdict shared by every experiment that solves systems.
pub(crate) fn identity_verdict(defects: &[f64]) -> Verdict {
    let worst = defects.iter().copied().fold(0.0f64, f64::max);
    Verdict::new(
        "discrete identity",
        !defects.is_empty() && defects.iter().all(|d| *d <= IDENTITY_TOL),
        format!("max relative defect {worst:.3e} over {} systems (tol {IDENTITY_TOL:e})", defects.len()),
    )
}

pub const IDENTITY_TOL: f64 = 1e-9;

/// Rows grouped by the string value of `col`, in first-seen order.
pub(crate) fn group_by<'a>(table: &'a Table, col: &str) -> Result<Vec<(String, Vec<crate::table::Record<'a>>)>, LabError> {
    let mut groups: Vec<(String, Vec<crate::table::Record<'a>>)> = Vec::new();
    for r in table.records() {
        let key = r.str(col)?.to_string();
        match groups.iter_mut().find(|g| g.0 == key) {
            Some(g) => g.1.push(r),
            None => groups.push((key, vec![r])),
        }
    }
    Ok(groups)
}
