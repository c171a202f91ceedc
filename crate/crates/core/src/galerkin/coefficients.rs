use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mesh::{Point, Triangulation};
use crate::{Error, Result};

pub type Mat2 = [[f64; 2]; 2];

#[derive(Clone, Debug, PartialEq)]
pub enum CoefficientKind {
    Constant(Mat2),
    /// `a(x) I` with `a` alternating between two values on a `cells × cells`
    /// grid over a rectangle
    Checkerboard { low: f64, high: f64, cells: usize },
    /// radial eigenvalue 1, tangential eigenvalue `ε²`
    Meyers { eps: f64 },
    Smooth,
}

/// Matrix-valued coefficient `A(x)` with declared ellipticity constant
/// `c` (`A(x)ξ·ξ ≥ c|ξ|²`) and entry bound.
#[derive(Clone)]
pub struct CoefficientField {
    kind: CoefficientKind,
    eval: Arc<dyn Fn(Point) -> Mat2 + Send + Sync>,
    ellipticity: f64,
    bound: f64,
}

impl fmt::Debug for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientField")
            .field("kind", &self.kind)
            .field("ellipticity", &self.ellipticity)
            .field("bound", &self.bound)
            .finish()
    }
}

/// Smallest eigenvalue of the symmetric part.
pub fn symmetric_min_eigenvalue(a: Mat2) -> f64 {
    let (p, q) = (a[0][0], a[1][1]);
    let r = 0.5 * (a[0][1] + a[1][0]);
    0.5 * (p + q) - (0.25 * (p - q) * (p - q) + r * r).sqrt()
}

fn max_entry(a: Mat2) -> f64 {
    a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
}

impl CoefficientField {
    /// Custom field with declared constants.
    pub fn new(
        kind: CoefficientKind,
        eval: impl Fn(Point) -> Mat2 + Send + Sync + 'static,
        ellipticity: f64,
        bound: f64,
    ) -> Result<Self> {
        if !(ellipticity > 0.0) || !(bound >= ellipticity) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < c ≤ ‖A‖_∞, got c = {ellipticity}, bound = {bound}"
            )));
        }
        Ok(CoefficientField {
            kind,
            eval: Arc::new(eval),
            ellipticity,
            bound,
        })
    }

    pub fn constant(m: Mat2) -> Result<Self> {
        let c = symmetric_min_eigenvalue(m);
        if !(c > 0.0) {
            return Err(Error::NotElliptic(format!("constant matrix {m:?} has c = {c}")));
        }
        Self::new(CoefficientKind::Constant(m), move |_| m, c, max_entry(m).max(c))
    }

    pub fn identity() -> Self {
        Self::constant([[1.0, 0.0], [0.0, 1.0]]).expect("identity is elliptic")
    }

    /// `a(x) I` alternating `low` / `high` on a `cells × cells` checkerboard
    /// of the rectangle `[x0, x1] × [y0, y1]`.
    pub fn checkerboard(low: f64, high: f64, cells: usize, rect: (f64, f64, f64, f64)) -> Result<Self> {
        if !(low > 0.0 && high > 0.0) || cells == 0 {
            return Err(Error::InvalidArgument(format!(
                "checkerboard needs positive values and cells, got {low}, {high}, {cells}"
            )));
        }
        let (x0, y0, x1, y1) = rect;
        let n = cells as f64;
        let eval = move |p: Point| {
            let i = (((p[0] - x0) / (x1 - x0) * n).floor() as i64).clamp(0, cells as i64 - 1);
            let j = (((p[1] - y0) / (y1 - y0) * n).floor() as i64).clamp(0, cells as i64 - 1);
            let a = if (i + j) % 2 == 0 { low } else { high };
            [[a, 0.0], [0.0, a]]
        };
        Self::new(
            CoefficientKind::Checkerboard { low, high, cells },
            eval,
            low.min(high),
            low.max(high),
        )
    }

    /// `A_ε(x) = P(x) + ε²(I − P(x))`, `P = xxᵀ/|x|²`, `A_ε(0) = ε² I`.
    pub fn meyers(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidArgument(format!("Meyers parameter ε = {eps} must lie in (0, 1)")));
        }
        let e2 = eps * eps;
        let eval = move |p: Point| {
            let r2 = p[0] * p[0] + p[1] * p[1];
            if r2 == 0.0 {
                return [[e2, 0.0], [0.0, e2]];
            }
            let (pxx, pxy, pyy) = (p[0] * p[0] / r2, p[0] * p[1] / r2, p[1] * p[1] / r2);
            [
                [pxx + e2 * (1.0 - pxx), (1.0 - e2) * pxy],
                [(1.0 - e2) * pxy, pyy + e2 * (1.0 - pyy)],
            ]
        };
        Self::new(CoefficientKind::Meyers { eps }, eval, e2, 1.0)
    }

    /// Smooth nonsymmetric field
    /// `[[2 + sin πx cos πy, 0.3], [−0.3, 2 + cos πx sin πy]]`, `c = 1`.
    pub fn smooth() -> Self {
        let eval = |p: Point| {
            let (x, y) = (p[0], p[1]);
            [
                [2.0 + (PI * x).sin() * (PI * y).cos(), 0.3],
                [-0.3, 2.0 + (PI * x).cos() * (PI * y).sin()],
            ]
        };
        Self::new(CoefficientKind::Smooth, eval, 1.0, 3.0).expect("valid constants")
    }

    pub fn kind(&self) -> &CoefficientKind {
        &self.kind
    }

    pub fn ellipticity(&self) -> f64 {
        self.ellipticity
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// `A(x)`, rejecting non-finite entries.
    pub fn eval(&self, p: Point) -> Result<Mat2> {
        let a = (self.eval)(p);
        if a.iter().flatten().all(|v| v.is_finite()) {
            Ok(a)
        } else {
            Err(Error::InvalidArgument(format!("coefficient undefined at ({}, {})", p[0], p[1])))
        }
    }

    /// Checks `A(x)ξ·ξ ≥ c|ξ|²` and `|A_ij| ≤ bound` at the barycenters of
    /// `tri` for random unit vectors `ξ`.
    pub fn spot_check(&self, tri: &Triangulation, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let slack = 1e-12 * self.bound;
        for t in 0..tri.num_triangles() {
            let p = tri.barycenter(t);
            let a = self.eval(p)?;
            let phi: f64 = rng.gen_range(0.0..2.0 * PI);
            let xi = [phi.cos(), phi.sin()];
            let q = xi[0] * (a[0][0] * xi[0] + a[0][1] * xi[1]) + xi[1] * (a[1][0] * xi[0] + a[1][1] * xi[1]);
            if q < self.ellipticity - slack {
                return Err(Error::NotElliptic(format!(
                    "A(x)ξ·ξ = {q} < c = {} at ({}, {})",
                    self.ellipticity, p[0], p[1]
                )));
            }
            if max_entry(a) > self.bound + slack {
                return Err(Error::NotElliptic(format!(
                    "entry {} exceeds bound {} at ({}, {})",
                    max_entry(a),
                    self.bound,
                    p[0],
                    p[1]
                )));
            }
        }
        Ok(())
    }
}

/// Quintic cutoff: 1 for `r ≤ 1/4`, 0 for `r ≥ 3/4`, `C²` in between.
/// Returns `(χ, χ', χ'')`.
pub fn cutoff(r: f64) -> (f64, f64, f64) {
    if r <= 0.25 {
        return (1.0, 0.0, 0.0);
    }
    if r >= 0.75 {
        return (0.0, 0.0, 0.0);
    }
    let t = (r - 0.25) * 2.0;
    let s = t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
    let ds = 30.0 * t * t * (1.0 - t) * (1.0 - t);
    let dds = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
    (1.0 - s, -2.0 * ds, -4.0 * dds)
}

/// Exact data for the Meyers field on `[−1, 1]²`: `u = χ(r) r^ε cos θ` and
/// `f = div(A_ε ∇u)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeyersSolution {
    pub eps: f64,
}

impl MeyersSolution {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidArgument(format!("Meyers parameter ε = {eps} must lie in (0, 1)")));
        }
        Ok(MeyersSolution { eps })
    }

    /// `p_c = 2 / (1 − ε)`: `∇u ∈ L^p` exactly for `p < p_c`.
    pub fn critical_exponent(&self) -> f64 {
        2.0 / (1.0 - self.eps)
    }

    pub fn u(&self, p: Point) -> f64 {
        let r = p[0].hypot(p[1]);
        if r == 0.0 {
            return 0.0;
        }
        cutoff(r).0 * r.powf(self.eps - 1.0) * p[0]
    }

    pub fn grad(&self, p: Point) -> [f64; 2] {
        let r = p[0].hypot(p[1]);
        if r == 0.0 {
            return [f64::INFINITY, 0.0];
        }
        let e = self.eps;
        let (chi, dchi, _) = cutoff(r);
        let g = chi * r.powf(e);
        let dg = dchi * r.powf(e) + e * chi * r.powf(e - 1.0);
        let (c, s) = (p[0] / r, p[1] / r);
        // ∇(g cos θ) = g' cos θ e_r − (g/r) sin θ e_θ
        let radial = dg * c;
        let tangential = -g / r * s;
        [radial * c - tangential * s, radial * s + tangential * c]
    }

    /// `f_ε = cos θ (χ'' r^ε + (2ε + 1) χ' r^{ε−1})`
    pub fn source(&self, p: Point) -> f64 {
        let r = p[0].hypot(p[1]);
        if r <= 0.25 {
            return 0.0;
        }
        let e = self.eps;
        let (_, dchi, ddchi) = cutoff(r);
        p[0] / r * (ddchi * r.powf(e) + (2.0 * e + 1.0) * dchi * r.powf(e - 1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn meyers_constants() {
        let a = CoefficientField::meyers(0.5).unwrap();
        assert_eq!(a.ellipticity(), 0.25);
        let m = a.eval([0.3, -0.4]).unwrap();
        assert!((symmetric_min_eigenvalue(m) - 0.25).abs() < 1e-14);
        assert_eq!(a.eval([0.0, 0.0]).unwrap(), [[0.25, 0.0], [0.0, 0.25]]);
        assert!(CoefficientField::meyers(1.0).is_err());
        assert_eq!(MeyersSolution::new(0.5).unwrap().critical_exponent(), 4.0);
    }

    #[test]
    fn nonsymmetric_constant_ellipticity() {
        let a = CoefficientField::constant([[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!((a.ellipticity() - 0.5).abs() < 1e-15);
        assert!(CoefficientField::constant([[1.0, 3.0], [0.0, 1.0]]).is_err());
    }

    #[test]
    fn cutoff_is_c2_at_the_joins() {
        let (c0, d0, dd0) = cutoff(0.25 + 1e-9);
        let (c1, d1, dd1) = cutoff(0.75 - 1e-9);
        assert!((c0 - 1.0).abs() < 1e-12 && d0.abs() < 1e-6 && dd0.abs() < 1e-6);
        assert!(c1.abs() < 1e-12 && d1.abs() < 1e-6 && dd1.abs() < 1e-6);
    }
}
