use num_complex::Complex64;

use super::EllipticOperator;
use crate::fit::{fit_loglog, FitResult};
use crate::spaces::{holder_seminorm, VertexFunction};
use crate::{Error, Exec, Result};

/// Resolvent bounds at one `λ` for the worst `L²`-normalized data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResolventSample {
    pub lambda: Complex64,
    /// probe vertex where `sup_{‖f‖₂=1} |u(x)|` is largest
    pub worst_vertex: usize,
    /// `‖u‖_∞` for the extremal `f` (`‖f‖₂ = 1`)
    pub u_inf: f64,
    /// `‖u‖_∞ |λ|^{1/2} / ‖f‖₂`
    pub r_inf: f64,
    pub holder_semi: f64,
    /// `|u|_{Ċ^η} |λ|^{(1−η)/2} / ‖f‖₂`
    pub r_eta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResolventSweep {
    pub eta: f64,
    pub samples: Vec<ResolventSample>,
    /// `ln ‖u‖_∞` against `ln |λ|`
    pub inf_fit: Option<FitResult>,
    /// `ln |u|_{Ċ^η}` against `ln |λ|`
    pub holder_fit: Option<FitResult>,
    /// `max R_∞ / min R_∞`
    pub r_inf_spread: f64,
    pub r_eta_spread: f64,
}

fn spread(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    hi / lo
}

/// For each `λ`, finds among `probes` the vertex `x` maximizing
/// `sup_{‖f‖₂ = 1} |((L + λ)⁻¹ f)(x)|` (one transposed solve per probe:
/// the row of the resolvent at `x` gives the extremal `f`), solves for that
/// `f` and records the sup norm and Hölder seminorm of the solution.
pub fn resolvent_bound_sweep(
    op: &EllipticOperator,
    lambdas: &[Complex64],
    probes: &[usize],
    eta: f64,
    exec: Exec,
) -> Result<ResolventSweep> {
    if probes.is_empty() || lambdas.is_empty() {
        return Err(Error::InvalidArgument("resolvent sweep needs λ values and probe vertices".into()));
    }
    let g = op.graph();
    let n = op.dim();
    let samples: Vec<Result<ResolventSample>> = exec.map(lambdas.len(), |k| {
        let lambda = lambdas[k];
        let lu_t = op.factor(lambda, true)?;
        let mut best = (0usize, -1.0f64, Vec::new());
        for &x in probes {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[x] = Complex64::new(1.0, 0.0);
            // w_y = R(x, y)
            let w = lu_t.solve(&e);
            let norm = w
                .iter()
                .enumerate()
                .map(|(y, z)| z.norm_sqr() / g.m(y))
                .sum::<f64>()
                .sqrt();
            if norm > best.1 {
                best = (x, norm, w);
            }
        }
        let (x, norm, w) = best;
        let f: Vec<Complex64> = w
            .iter()
            .enumerate()
            .map(|(y, z)| z.conj() / (g.m(y) * norm))
            .collect();
        let u = op.resolvent_solve(lambda, &f)?;
        let u_inf = u.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        let semi = holder_seminorm(g, &VertexFunction::from_values(u), eta)?.value;
        let modulus = lambda.norm();
        Ok(ResolventSample {
            lambda,
            worst_vertex: x,
            u_inf,
            r_inf: u_inf * modulus.sqrt(),
            holder_semi: semi,
            r_eta: semi * modulus.powf((1.0 - eta) / 2.0),
        })
    });
    let samples = samples.into_iter().collect::<Result<Vec<_>>>()?;
    let fit = |sel: fn(&ResolventSample) -> f64| {
        let pairs: Vec<(f64, f64)> = samples.iter().map(|s| (s.lambda.norm(), sel(s))).collect();
        fit_loglog(&pairs).ok()
    };
    Ok(ResolventSweep {
        eta,
        inf_fit: fit(|s| s.u_inf),
        holder_fit: fit(|s| s.holder_semi),
        r_inf_spread: spread(samples.iter().map(|s| s.r_inf)),
        r_eta_spread: spread(samples.iter().map(|s| s.r_eta)),
        samples,
    })
}
