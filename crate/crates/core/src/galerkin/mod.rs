//! P1 Galerkin approximation of `div(A∇u) = f` with zero boundary values,
//! the reconstruction `R_h`, the discrete operator `L_h` and the
//! coefficient fields used by the experiments.

mod coefficients;
mod reconstruct;
mod system;

pub use coefficients::{cutoff, symmetric_min_eigenvalue, CoefficientField, CoefficientKind, Mat2, MeyersSolution};
pub use reconstruct::{
    holder_on_points, prolongate, reconstruct, P1Field, P1Holder, PointLocator, QuadratureValue,
};
pub use system::{load_pairing, write_solution, P1System, Solution, Source};
