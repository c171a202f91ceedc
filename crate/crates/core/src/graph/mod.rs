//! Weighted graphs `(Γ, h, μ, m)` with a boundary set, the path metric and
//! the local geometric constants (doubling, volume lower bound, Poincaré).

mod geometry;
mod io;
mod metric;
mod weighted;

pub use geometry::{geometry_report, geometry_report_at, poincare_constant, GeometryReport};
pub use io::write_graph;
pub use metric::{
    ball, dijkstra, directed_h_star, distance, h_star, h_star_with, volume, BallRule, HStarRule, TouchRule,
};
pub use weighted::{Edge, WeightedGraph};
