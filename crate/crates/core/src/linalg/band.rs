use super::{reverse_cuthill_mckee, CsrMatrix, Scalar};
use crate::{Error, Result};

/// LU factorization (no pivoting) of a matrix stored in band form after a
/// reverse Cuthill–McKee permutation.
///
/// Pivoting is omitted: the systems factored here are either coercive or a
/// complex rotation of a coercive matrix (sectorial operator plus a shift in
/// the resolvent set), for which Gaussian elimination without pivoting is
/// stable. Tiny pivots are reported as [`Error::FactorizationBreakdown`].
#[derive(Clone, Debug)]
pub struct BandLu<T> {
    n: usize,
    lower: usize,
    upper: usize,
    width: usize,
    /// `perm[new] = old`
    perm: Vec<usize>,
    data: Vec<T>,
}

impl<T: Scalar> BandLu<T> {
    pub fn factor(a: &CsrMatrix<T>) -> Result<Self> {
        let perm = reverse_cuthill_mckee(a);
        Self::factor_with_permutation(a, perm)
    }

    pub fn factor_with_permutation(a: &CsrMatrix<T>, perm: Vec<usize>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: a.ncols(),
            });
        }
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: perm.len(),
            });
        }
        let mut inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let (mut lower, mut upper) = (0usize, 0usize);
        for old_i in 0..n {
            let i = inv[old_i];
            for (old_j, _) in a.row(old_i) {
                let j = inv[old_j];
                if j < i {
                    lower = lower.max(i - j);
                } else {
                    upper = upper.max(j - i);
                }
            }
        }
        let width = lower + upper + 1;
        let mut data = vec![T::zero(); n * width];
        for old_i in 0..n {
            let i = inv[old_i];
            for (old_j, v) in a.row(old_i) {
                let j = inv[old_j];
                data[i * width + (j + lower - i)] += v;
            }
        }

        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let pivot = data[k * width + lower];
            if !(pivot.modulus() > 1e-14 * scale) || !pivot.is_finite() {
                return Err(Error::FactorizationBreakdown {
                    pivot: k,
                    magnitude: pivot.modulus(),
                });
            }
            let inv_pivot = T::one() / pivot;
            let jmax = (k + upper).min(n - 1);
            let imax = (k + lower).min(n - 1);
            for i in k + 1..=imax {
                let ik = i * width + (k + lower - i);
                let l = data[ik] * inv_pivot;
                data[ik] = l;
                if l == T::zero() {
                    continue;
                }
                for j in k + 1..=jmax {
                    let kj = data[k * width + (j + lower - k)];
                    data[i * width + (j + lower - i)] -= l * kj;
                }
            }
        }
        Ok(BandLu {
            n,
            lower,
            upper,
            width,
            perm,
            data,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `(lower, upper)` bandwidths after reordering.
    pub fn bandwidth(&self) -> (usize, usize) {
        (self.lower, self.upper)
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        assert_eq!(b.len(), self.n);
        let (n, w, lo, up) = (self.n, self.width, self.lower, self.upper);
        let mut y: Vec<T> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let j0 = i.saturating_sub(lo);
            let mut s = y[i];
            for j in j0..i {
                s -= self.data[i * w + (j + lo - i)] * y[j];
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            let jmax = (i + up).min(n - 1);
            let mut s = y[i];
            for j in i + 1..=jmax {
                s -= self.data[i * w + (j + lo - i)] * y[j];
            }
            y[i] = s / self.data[i * w + lo];
        }
        let mut x = vec![T::zero(); n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}
