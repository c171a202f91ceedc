//! Sparse linear algebra used by the assembly and resolvent code: a CSR
//! matrix, reverse Cuthill–McKee ordering, a banded LU factorization and
//! BiCGSTAB, all generic over real and complex scalars.

mod band;
mod csr;
mod iterative;
mod ordering;
mod scalar;

pub use band::BandLu;
pub use csr::{CsrMatrix, TripletBuilder};
pub use iterative::{bicgstab, IterativeOutcome};
pub use ordering::reverse_cuthill_mckee;
pub use scalar::Scalar;

use crate::Result;

/// Solution of a sparse linear system together with its relative residual
/// `‖Ax − b‖₂ / ‖b‖₂` (zero when `b = 0`).
#[derive(Clone, Debug)]
pub struct SolveOutcome<T> {
    pub x: Vec<T>,
    pub residual: f64,
}

/// Direct solve with RCM reordering and banded LU.
pub fn solve_direct<T: Scalar>(a: &CsrMatrix<T>, b: &[T]) -> Result<SolveOutcome<T>> {
    let lu = BandLu::factor(a)?;
    let x = lu.solve(b);
    let residual = relative_residual(a, &x, b);
    Ok(SolveOutcome { x, residual })
}

pub fn relative_residual<T: Scalar>(a: &CsrMatrix<T>, x: &[T], b: &[T]) -> f64 {
    let ax = a.mul_vec(x);
    let r: f64 = ax
        .iter()
        .zip(b)
        .map(|(&p, &q)| (p - q).modulus_sqr())
        .sum::<f64>()
        .sqrt();
    let nb = norm2(b);
    if nb == 0.0 {
        r
    } else {
        r / nb
    }
}

pub fn norm2<T: Scalar>(v: &[T]) -> f64 {
    v.iter().map(|x| x.modulus_sqr()).sum::<f64>().sqrt()
}

pub fn dot_conj<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + x * y.conj())
}
