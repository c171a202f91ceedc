use nalgebra::DMatrix;

use super::{dijkstra, WeightedGraph};
use crate::{Error, Exec, Result};

/// Sampled estimates of the local doubling, lower-volume (`σ = 2`) and
/// Poincaré (`q = 2`) constants up to scale `r0`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometryReport {
    pub r0: f64,
    /// `max V(x, 2r) / V(x, r)`
    pub c_d: f64,
    /// `min V(x, r) / r²`
    pub c_l: f64,
    /// largest exact ball constant in `(P_2)`
    pub c_p: f64,
    /// `log2 C_D`
    pub d: f64,
    pub centers: usize,
    pub balls: usize,
}

/// Geometry report over `sample_count` evenly spaced centers (all vertices
/// when `sample_count` is 0 or exceeds the vertex count) and radii
/// `r0/4, r0/2, r0`.
pub fn geometry_report(g: &WeightedGraph, r0: f64, sample_count: usize) -> Result<GeometryReport> {
    let n = g.num_vertices();
    let count = if sample_count == 0 { n } else { sample_count.min(n) };
    let centers: Vec<usize> = (0..count).map(|k| k * n / count).collect();
    geometry_report_at(g, r0, &centers, Exec::default())
}

/// Geometry report over explicit centers.
pub fn geometry_report_at(
    g: &WeightedGraph,
    r0: f64,
    centers: &[usize],
    exec: Exec,
) -> Result<GeometryReport> {
    if centers.is_empty() {
        return Err(Error::InvalidArgument("geometry report needs at least one center".into()));
    }
    if !(r0 > g.min_weight()) || !r0.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "r0 = {r0} must exceed the smallest edge weight {}",
            g.min_weight()
        )));
    }
    let radii = [r0 / 4.0, r0 / 2.0, r0];
    let per_center: Vec<Result<(f64, f64, f64)>> = exec.map(centers.len(), |k| {
        let x = centers[k];
        let dist = dijkstra(g, x, 2.0 * r0);
        let volume = |r: f64| -> f64 {
            (0..g.num_vertices())
                .filter(|&y| dist[y] < r)
                .map(|y| g.m(y))
                .sum()
        };
        let (mut cd, mut cl, mut cp) = (1.0f64, f64::INFINITY, 0.0f64);
        for &r in &radii {
            let v = volume(r);
            cd = cd.max(volume(2.0 * r) / v);
            cl = cl.min(v / (r * r));
            let members: Vec<usize> = (0..g.num_vertices()).filter(|&y| dist[y] < r).collect();
            cp = cp.max(poincare_constant(g, &members, r)?);
        }
        Ok((cd, cl, cp))
    });
    let mut report = GeometryReport {
        r0,
        c_d: 1.0,
        c_l: f64::INFINITY,
        c_p: 0.0,
        d: 0.0,
        centers: centers.len(),
        balls: centers.len() * radii.len(),
    };
    for item in per_center {
        let (cd, cl, cp) = item?;
        report.c_d = report.c_d.max(cd);
        report.c_l = report.c_l.min(cl);
        report.c_p = report.c_p.max(cp);
    }
    report.d = report.c_d.log2();
    Ok(report)
}

/// Optimal constant `C` in
/// `Σ_{y∈B} |f(y) − f_B|² m(y) ≤ C r² Σ_{y∈B} |∇f(y)|² m(y)`
/// for the vertex set `B` of a ball of radius `r`. The gradient at `y ∈ B`
/// uses every neighbour of `y`, so the values of `f` just outside `B` are
/// free variables; they are eliminated exactly (Schur complement) before
/// solving the generalized eigenproblem on mean-zero functions.
pub fn poincare_constant(g: &WeightedGraph, ball: &[usize], r: f64) -> Result<f64> {
    if ball.len() <= 1 {
        return Ok(0.0);
    }
    let nb = ball.len();
    let mut local = std::collections::HashMap::with_capacity(nb);
    for (k, &y) in ball.iter().enumerate() {
        local.insert(y, k);
    }
    // outside neighbours get their own indices
    let mut outside = std::collections::HashMap::new();
    let mut pairs = Vec::new();
    for (k, &y) in ball.iter().enumerate() {
        let w = g.m(y) / (g.h_x(y) * g.h_x(y));
        for (z, _) in g.neighbors(y) {
            let idx = match local.get(&z) {
                Some(&j) => Ok(j),
                None => {
                    let next = outside.len();
                    Err(*outside.entry(z).or_insert(next))
                }
            };
            pairs.push((k, idx, w));
        }
    }
    let no = outside.len();
    // gradient form split into ball/ball, ball/outside and the diagonal
    // outside/outside block
    let mut rbb = DMatrix::<f64>::zeros(nb, nb);
    let mut rbo = DMatrix::<f64>::zeros(nb, no);
    let mut doo = vec![0.0; no];
    for &(k, idx, w) in &pairs {
        rbb[(k, k)] += w;
        match idx {
            Ok(j) => {
                rbb[(j, j)] += w;
                rbb[(k, j)] -= w;
                rbb[(j, k)] -= w;
            }
            Err(o) => {
                doo[o] += w;
                rbo[(k, o)] -= w;
            }
        }
    }
    let mut schur = rbb;
    for o in 0..no {
        let col = rbo.column(o).clone_owned();
        schur -= (&col * col.transpose()) / doo[o];
    }

    let m: Vec<f64> = ball.iter().map(|&y| g.m(y)).collect();
    let vol: f64 = m.iter().sum();
    let lhs = DMatrix::from_fn(nb, nb, |i, j| {
        (if i == j { m[i] } else { 0.0 }) - m[i] * m[j] / vol
    });

    // both forms vanish on constants: pin the last vertex to zero
    let k = nb - 1;
    let s = schur.view((0, 0), (k, k)).clone_owned();
    let a = lhs.view((0, 0), (k, k)).clone_owned();
    let chol = s.cholesky().ok_or_else(|| {
        Error::InvalidGraph("gradient form on ball is not positive definite".into())
    })?;
    let linv = chol
        .l()
        .solve_lower_triangular(&DMatrix::identity(k, k))
        .ok_or_else(|| Error::InvalidGraph("singular Cholesky factor".into()))?;
    let c = &linv * a * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let top = c.symmetric_eigenvalues().max();
    Ok(top.max(0.0) / (r * r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ball;

    #[test]
    fn singleton_ball_has_zero_constant() {
        let g = WeightedGraph::path(&[1.0, 1.0]).unwrap();
        assert_eq!(poincare_constant(&g, &[1], 0.5).unwrap(), 0.0);
    }

    #[test]
    fn lattice_doubling_is_bounded() {
        let g = WeightedGraph::lattice_box(15, 15).unwrap();
        let rep = geometry_report_at(&g, 4.0, &[112], Exec::Sequential).unwrap();
        assert!(rep.c_d >= 1.0 && rep.c_d < 16.0);
        assert!(rep.c_l > 0.0);
        assert!(rep.c_p > 0.0);
        assert!((rep.d - rep.c_d.log2()).abs() < 1e-15);
        assert!(geometry_report_at(&g, 0.5, &[112], Exec::Sequential).is_err());
        assert!(geometry_report_at(&g, 4.0, &[], Exec::Sequential).is_err());
        let b = ball(&g, 112, 1.5);
        assert_eq!(b.len(), 5);
    }
}
