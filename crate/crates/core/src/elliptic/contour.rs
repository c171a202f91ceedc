use std::f64::consts::PI;

use num_complex::Complex64;

use super::{expm_action, EllipticOperator};
use crate::{Error, Exec, Result};

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.reverse();
    out
}

/// Contour `γ`: two rays `r e^{±iθ}`, `r ≥ 1/t`, joined by the arc of
/// radius `1/t`, oriented counterclockwise around the spectrum of `−L`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourOptions {
    pub theta: f64,
    /// rays stop where `e^{t r cos θ} = 10^{−digits}`
    pub digits: f64,
    pub ray_panels: usize,
    pub nodes_per_panel: usize,
    /// nodes on the whole arc
    pub arc_nodes: usize,
}

impl Default for ContourOptions {
    fn default() -> Self {
        ContourOptions {
            theta: 3.0 * PI / 4.0,
            digits: 18.0,
            ray_panels: 10,
            nodes_per_panel: 20,
            arc_nodes: 64,
        }
    }
}

/// `(λ, w)` with `e^{−tL}v ≈ Σ w e^{tλ} (L + λ)⁻¹ v` (full contour) or the
/// upper half only when `half` is set.
fn nodes(t: f64, opts: &ContourOptions, half: bool) -> Vec<(Complex64, Complex64)> {
    let theta = opts.theta;
    let r0 = 1.0 / t;
    let r_max = opts.digits * 10f64.ln() / (t * theta.cos().abs());
    let panel = (r_max - r0) / opts.ray_panels as f64;
    let gl = gauss_legendre(opts.nodes_per_panel);
    let up = Complex64::from_polar(1.0, theta);
    let mut out = Vec::new();
    let ray = |dir: Complex64, sign: f64, out: &mut Vec<(Complex64, Complex64)>| {
        for p in 0..opts.ray_panels {
            let a = r0 + p as f64 * panel;
            for &(x, w) in &gl {
                let r = a + 0.5 * panel * (x + 1.0);
                out.push((dir * r, dir * (sign * 0.5 * panel * w)));
            }
        }
    };
    ray(up, 1.0, &mut out);
    let arc_gl = gauss_legendre(if half { opts.arc_nodes / 2 } else { opts.arc_nodes });
    let (lo, hi) = if half { (0.0, theta) } else { (-theta, theta) };
    for &(x, w) in &arc_gl {
        let phi = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
        let lambda = Complex64::from_polar(r0, phi);
        out.push((lambda, Complex64::i() * lambda * (0.5 * (hi - lo) * w)));
    }
    if !half {
        ray(up.conj(), -1.0, &mut out);
    }
    out
}

/// `e^{−tL} v` by quadrature of `(2πi)⁻¹ ∫_γ e^{tλ} (L + λ)⁻¹ v dλ`; one
/// resolvent solve per node. For real `L` and `v` only the upper half of
/// `γ` is needed.
pub fn semigroup_apply(
    op: &EllipticOperator,
    t: f64,
    v: &[Complex64],
    opts: &ContourOptions,
    exec: Exec,
) -> Result<Vec<Complex64>> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("time t = {t} must be positive")));
    }
    let real = op.is_real() && v.iter().all(|z| z.im == 0.0);
    let nodes = nodes(t, opts, real);
    let parts: Vec<Result<Vec<Complex64>>> = exec.map(nodes.len(), |k| {
        let (lambda, w) = nodes[k];
        let lu = op.factor(lambda, false)?;
        let x = lu.solve(v);
        let s = w * (lambda * t).exp();
        Ok(x.into_iter().map(|z| z * s).collect())
    });
    let mut acc = vec![Complex64::new(0.0, 0.0); v.len()];
    for p in parts {
        for (a, z) in acc.iter_mut().zip(p?) {
            *a += z;
        }
    }
    let out = if real {
        acc.into_iter().map(|z| Complex64::new(z.im / PI, 0.0)).collect()
    } else {
        let c = 1.0 / (2.0 * PI);
        acc.into_iter().map(|z| Complex64::new(z.im * c, -z.re * c)).collect()
    };
    Ok(out)
}

/// Graphs up to this size are cross-checked against the Taylor oracle.
pub const ORACLE_LIMIT: usize = 64 * 64;

/// Column `K_t(·, y) = (e^{−tL} δ_y) / m(y)` and, on graphs up to
/// [`ORACLE_LIMIT`] vertices, the largest deviation from the Taylor oracle.
/// Deviations above `1e−6` are reported as errors.
pub fn semigroup_kernel(
    op: &EllipticOperator,
    t: f64,
    y: usize,
    opts: &ContourOptions,
    exec: Exec,
) -> Result<(Vec<Complex64>, Option<f64>)> {
    let n = op.dim();
    if y >= n {
        return Err(Error::InvalidArgument(format!("source {y} out of range")));
    }
    let mut delta = vec![Complex64::new(0.0, 0.0); n];
    delta[y] = Complex64::new(1.0, 0.0);
    let my = op.graph().m(y);
    let col: Vec<Complex64> = semigroup_apply(op, t, &delta, opts, exec)?
        .into_iter()
        .map(|z| z / my)
        .collect();
    let deviation = if n <= ORACLE_LIMIT {
        let oracle = expm_action(op.matrix(), t, &delta);
        let dev = col
            .iter()
            .zip(&oracle)
            .fold(0.0f64, |a, (k, o)| a.max((k * my - o).norm()));
        if dev > 1e-6 {
            return Err(Error::ContourMismatch { deviation: dev });
        }
        Some(dev)
    } else {
        None
    };
    Ok((col, deviation))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1, 2, 5, 20, 64] {
            let gl = gauss_legendre(n);
            let total: f64 = gl.iter().map(|p| p.1).sum();
            assert!((total - 2.0).abs() < 1e-13, "n = {n}");
            let deg = 2 * n - 1;
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            let q: f64 = gl.iter().map(|&(x, w)| w * x.powi(deg as i32)).sum();
            assert!((q - exact).abs() < 1e-13);
            let even = 2 * (n - 1);
            let q: f64 = gl.iter().map(|&(x, w)| w * x.powi(even as i32)).sum();
            assert!((q - 2.0 / (even as f64 + 1.0)).abs() < 1e-13);
        }
    }
}
