//! Functions on vertices and edges of a weighted graph, the differential and
//! gradient, Lebesgue/Sobolev/Hölder norms, dual norms, the uncentered
//! maximal function and numerical embedding checks.

mod dual;
mod embedding;
mod functions;
mod maximal;
mod norms;

pub use dual::{dual_norm, hilbertian_norm, sum_norm, AscentOptions, DualMode, DualNorm, SobolevVariant};
pub use embedding::{embedding_report, EmbeddingReport};
pub use functions::{differential, gradient_length, EdgeFunction, VertexFunction};
pub use maximal::maximal_function;
pub use norms::{
    edge_gradient_bracket, holder_seminorm, holder_seminorm_with, lp_edge_norm, lp_norm, norm,
    norm_report, w1p_norm, HolderSampling, HolderValue, NormKind, NormReport, DEFAULT_PAIR_CAP,
    NORM_CSV_HEADER,
};
