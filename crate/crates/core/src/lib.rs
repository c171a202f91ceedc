//! Numerical laboratory for P1 Galerkin approximations of divergence-form
//! elliptic equations and for second order elliptic operators on weighted
//! graphs.
//!
//! The crate is organised bottom-up:
//!
//! * [`mesh`] builds admissible, shape-regular triangulations of convex polygons.
//! * [`graph`] holds weighted graphs `(Γ, h, μ, m)`, their path metric and the
//!   geometric constants of doubling, volume growth and Poincaré inequalities.
//! * [`spaces`] implements functions on vertices and edges together with the
//!   discrete Lebesgue, Sobolev, Hölder and dual norms.
//! * [`galerkin`] assembles and solves the P1 system and relates it to the
//!   graph operator `L_h`.
//! * [`elliptic`] builds general (complex, nonsymmetric) elliptic operators on
//!   graphs, their resolvents and heat kernels.
//!
//! Data-parallel loops go through [`exec::Exec`], which runs on rayon when the
//! `parallel` feature is enabled and falls back to plain iteration otherwise.

pub mod elliptic;
pub mod error;
pub mod exec;
pub mod fit;
pub mod galerkin;
pub mod graph;
pub mod linalg;
pub mod mesh;
pub mod spaces;

pub use error::{Error, Result};
pub use exec::Exec;
