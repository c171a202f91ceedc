use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::EllipticOperator;
use crate::{Error, Result};

/// Spectral parameter `λ ∈ Σ_μ` with `μ = π/2 + (π/2 − ω)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorPoint {
    pub lambda: Complex64,
    pub mu_sector: f64,
    pub omega: f64,
}

/// Sector half-angle used for an operator with accretivity angle `ω`.
pub fn sector_angle(omega: f64) -> f64 {
    FRAC_PI_2 + 0.5 * (FRAC_PI_2 - omega)
}

impl SectorPoint {
    pub fn new(lambda: Complex64, omega: f64) -> Result<Self> {
        if !(0.0..FRAC_PI_2).contains(&omega) {
            return Err(Error::InvalidArgument(format!("accretivity angle ω = {omega} must lie in [0, π/2)")));
        }
        let mu_sector = sector_angle(omega);
        if lambda != Complex64::new(0.0, 0.0) && lambda.arg().abs() >= mu_sector {
            return Err(Error::InvalidArgument(format!(
                "λ = {lambda} lies outside the sector |arg λ| < {mu_sector}"
            )));
        }
        Ok(SectorPoint {
            lambda,
            mu_sector,
            omega,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AccretivityReport {
    /// largest `|arg⟨Lu, u⟩|` found: a lower bound for the sharp angle
    pub omega_hat: f64,
    /// probe attaining `omega_hat`
    pub probe: Vec<Complex64>,
    /// `max_e |arg(c_xy + c_yx)|`: an upper bound for the sharp angle
    pub omega_edge: f64,
    pub mu_sector: f64,
}

fn angle(op: &EllipticOperator, u: &[Complex64]) -> Option<f64> {
    let q = op.form(u, u);
    (q.norm() > 0.0).then(|| q.arg().abs())
}

/// Estimates the accretivity angle from `probes` random complex functions,
/// then refines the 10 worst by coordinate ascent on `|arg⟨Lu, u⟩|`.
pub fn accretivity_angle(op: &EllipticOperator, probes: usize, seed: u64) -> AccretivityReport {
    let n = op.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scored: Vec<(f64, Vec<Complex64>)> = Vec::with_capacity(probes);
    for _ in 0..probes {
        let u: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if let Some(a) = angle(op, &u) {
            scored.push((a, u));
        }
    }
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    scored.truncate(10);
    let steps = 2000;
    for (best, u) in scored.iter_mut() {
        let mut scale = 0.5;
        for k in 0..steps {
            let v = rng.gen_range(0..n);
            let dir = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
            let old = u[v];
            u[v] = old + dir;
            match angle(op, u) {
                Some(a) if a > *best => *best = a,
                _ => u[v] = old,
            }
            if k % n.max(1) == n.max(1) - 1 {
                scale *= 0.7;
            }
        }
    }
    let (omega_hat, probe) = scored
        .into_iter()
        .next()
        .unwrap_or((0.0, vec![Complex64::new(0.0, 0.0); n]));
    let omega_edge = (0..op.graph().num_edges())
        .map(|id| op.coefficients().symmetric_sum(id).arg().abs())
        .fold(0.0, f64::max);
    AccretivityReport {
        omega_hat,
        probe,
        omega_edge,
        mu_sector: sector_angle(omega_hat),
    }
}
