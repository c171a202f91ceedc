//! Convex polygonal domains and admissible triangulations.

mod build;
mod io;
mod polygon;
mod refine;
mod report;
mod triangulation;

pub use build::{structured_rectangle, triangulate};
pub use io::{parse_mesh, parse_polygon, write_mesh};
pub use polygon::Polygon;
pub use refine::{refine_red, refine_red_times};
pub use report::{regularity_report, RegularityReport, Violation, ViolationKind};
pub use triangulation::Triangulation;

pub type Point = [f64; 2];

pub(crate) fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

pub(crate) fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}
