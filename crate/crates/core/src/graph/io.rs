use std::fmt::Write;

use super::WeightedGraph;

/// Plain-text export: `vertex u m(u)` lines by vertex, then
/// `edge u v h mu` lines with `u < v` sorted lexicographically.
pub fn write_graph(g: &WeightedGraph) -> String {
    let mut out = String::new();
    for x in 0..g.num_vertices() {
        let _ = writeln!(out, "vertex {x} {:e}", g.m(x));
    }
    for e in g.edges() {
        let _ = writeln!(out, "edge {} {} {:e} {:e}", e.a, e.b, e.h, e.mu);
    }
    out
}
