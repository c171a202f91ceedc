//! Second order elliptic operators on weighted graphs with complex,
//! possibly nonsymmetric edge coefficients: resolvents, sectoriality,
//! heat kernels by contour integration and their Gaussian bounds.

mod coefficients;
mod contour;
mod expm;
mod kernel;
mod operator;
mod resolvent;
mod sector;

pub use coefficients::{EdgeCoefficients, DENSE_DELTA_LIMIT};
pub use contour::{gauss_legendre, semigroup_apply, semigroup_kernel, ContourOptions, ORACLE_LIMIT};
pub use expm::expm_action;
pub use kernel::{
    fit_kernel_bounds, kernel_bound_check, kernel_table, BoundFit, HolderFit, KernelBoundReport, KernelEntry,
    KernelIncrement, KernelSample, KernelTable, Regime,
    KERNEL_CSV_HEADER,
};
pub use operator::{build_operator, EllipticOperator};
pub use resolvent::{resolvent_bound_sweep, ResolventSample, ResolventSweep};
pub use sector::{accretivity_angle, sector_angle, AccretivityReport, SectorPoint};
