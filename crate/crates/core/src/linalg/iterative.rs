use super::{dot_conj, norm2, CsrMatrix, Scalar};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct IterativeOutcome<T> {
    pub x: Vec<T>,
    pub residual: f64,
    pub iterations: usize,
}

/// BiCGSTAB with zero initial guess. Stops when the true relative residual
/// drops below `tol`.
pub fn bicgstab<T: Scalar>(
    a: &CsrMatrix<T>,
    b: &[T],
    tol: f64,
    max_iter: usize,
) -> Result<IterativeOutcome<T>> {
    let n = b.len();
    let nb = norm2(b);
    let mut x = vec![T::zero(); n];
    if nb == 0.0 {
        return Ok(IterativeOutcome {
            x,
            residual: 0.0,
            iterations: 0,
        });
    }
    let mut r = b.to_vec();
    let r_hat = r.clone();
    let mut p = vec![T::zero(); n];
    let mut v = vec![T::zero(); n];
    let (mut rho, mut alpha, mut omega) = (T::one(), T::one(), T::one());
    let mut res = 1.0;
    for it in 1..=max_iter {
        let rho_new = dot_conj(&r, &r_hat);
        if rho_new.modulus() < f64::MIN_POSITIVE {
            break;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        v = a.mul_vec(&p);
        alpha = rho / dot_conj(&v, &r_hat);
        let s: Vec<T> = (0..n).map(|i| r[i] - alpha * v[i]).collect();
        let t = a.mul_vec(&s);
        let tt = dot_conj(&t, &t);
        omega = if tt.modulus() > 0.0 {
            dot_conj(&s, &t) / tt
        } else {
            T::zero()
        };
        for i in 0..n {
            x[i] += alpha * p[i] + omega * s[i];
            r[i] = s[i] - omega * t[i];
        }
        res = norm2(&r) / nb;
        if res <= tol {
            let true_res = super::relative_residual(a, &x, b);
            if true_res <= tol {
                return Ok(IterativeOutcome {
                    x,
                    residual: true_res,
                    iterations: it,
                });
            }
        }
        if omega.modulus() == 0.0 {
            break;
        }
    }
    Err(Error::NotConverged {
        residual: res,
        iterations: max_iter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converges_on_convection_diffusion() {
        let n = 60;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.5));
            if i > 0 {
                t.push((i, i - 1, -1.4));
            }
            if i + 1 < n {
                t.push((i, i + 1, -0.6));
            }
        }
        let a = CsrMatrix::from_triplets(n, n, &t);
        let b = vec![1.0; n];
        let out = bicgstab(&a, &b, 1e-12, 500).unwrap();
        assert!(out.residual <= 1e-12);
    }
}
