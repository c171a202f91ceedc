use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::WeightedGraph;
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq)]
struct Item {
    dist: f64,
    vertex: usize,
}

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed: BinaryHeap is a max-heap
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest-path distances from `source` with edge lengths `h_xy`.
/// Vertices farther than `cutoff` are left at `+∞`.
pub fn dijkstra(g: &WeightedGraph, source: usize, cutoff: f64) -> Vec<f64> {
    let n = g.num_vertices();
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Item {
        dist: 0.0,
        vertex: source,
    });
    while let Some(Item { dist: d, vertex: x }) = heap.pop() {
        if d > dist[x] {
            continue;
        }
        for (y, e) in g.neighbors(x) {
            let nd = d + g.edge(e).h;
            if nd < dist[y] && nd <= cutoff {
                dist[y] = nd;
                heap.push(Item { dist: nd, vertex: y });
            }
        }
    }
    dist
}

/// `d(x, y)`
pub fn distance(g: &WeightedGraph, x: usize, y: usize) -> Result<f64> {
    let n = g.num_vertices();
    if x >= n || y >= n {
        return Err(Error::InvalidArgument(format!("vertex out of range (n = {n})")));
    }
    let d = dijkstra(g, x, f64::INFINITY)[y];
    if d.is_finite() {
        Ok(d)
    } else {
        Err(Error::Unreachable(y))
    }
}

/// Which distance comparison defines ball membership.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BallRule {
    /// `d(x, y) < r`
    #[default]
    Strict,
    /// `d(x, y) ≤ r`
    Closed,
}

impl BallRule {
    pub fn contains(self, d: f64, r: f64) -> bool {
        match self {
            BallRule::Strict => d < r,
            BallRule::Closed => d <= r,
        }
    }
}

/// `B(x, r) = {y : d(x, y) < r}`, sorted.
pub fn ball(g: &WeightedGraph, x: usize, r: f64) -> Vec<usize> {
    let dist = dijkstra(g, x, r);
    (0..g.num_vertices()).filter(|&y| dist[y] < r).collect()
}

/// `V(x, r) = Σ_{y ∈ B(x, r)} m(y)`
pub fn volume(g: &WeightedGraph, x: usize, r: f64) -> f64 {
    ball(g, x, r).into_iter().map(|y| g.m(y)).sum()
}

/// Which edges count towards the directed sup in `h*`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TouchRule {
    /// at least one endpoint in the ball
    #[default]
    Either,
    /// both endpoints in the ball
    Both,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HStarRule {
    pub ball: BallRule,
    pub touch: TouchRule,
}

/// Directed `h*_{x→y}` given distances from `x` and `d(x, y)`.
///
/// When no edge qualifies (singleton ball under `TouchRule::Both`) the
/// weights incident to `x` are used.
pub fn directed_h_star(g: &WeightedGraph, x: usize, dist_x: &[f64], radius: f64, rule: HStarRule) -> f64 {
    let inside = |v: usize| rule.ball.contains(dist_x[v], radius);
    let mut sup = 0.0f64;
    for e in g.edges() {
        let hit = match rule.touch {
            TouchRule::Either => inside(e.a) || inside(e.b),
            TouchRule::Both => inside(e.a) && inside(e.b),
        };
        if hit {
            sup = sup.max(e.h);
        }
    }
    if sup == 0.0 {
        sup = g.h_x(x);
    }
    sup
}

/// `h*_{xy} = min(h*_{x→y}, h*_{y→x})` with the default rule (strict balls,
/// edges with at least one endpoint inside).
pub fn h_star(g: &WeightedGraph, x: usize, y: usize) -> f64 {
    h_star_with(g, x, y, HStarRule::default())
}

pub fn h_star_with(g: &WeightedGraph, x: usize, y: usize, rule: HStarRule) -> f64 {
    if x == y {
        return 0.0;
    }
    let dx = dijkstra(g, x, f64::INFINITY);
    let dy = dijkstra(g, y, f64::INFINITY);
    let d = dx[y];
    directed_h_star(g, x, &dx, d, rule).min(directed_h_star(g, y, &dy, d, rule))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{triangulate, Polygon};

    #[test]
    fn path_distances() {
        let g = WeightedGraph::path(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(distance(&g, 0, 3).unwrap(), 6.0);
        assert_eq!(distance(&g, 2, 2).unwrap(), 0.0);
        assert!(distance(&g, 0, 9).is_err());
    }

    #[test]
    fn h_star_on_short_path() {
        let g = WeightedGraph::path(&[1.0, 5.0]).unwrap();
        assert_eq!(h_star(&g, 0, 1), 1.0);
        assert_eq!(h_star(&g, 1, 0), 1.0);
        assert_eq!(h_star(&g, 1, 1), 0.0);
        let uniform = WeightedGraph::lattice_box(4, 3).unwrap();
        for (x, y) in [(0, 1), (0, 11), (5, 6)] {
            assert_eq!(h_star(&uniform, x, y), 1.0);
        }
    }

    #[test]
    fn ball_matches_distance_filter() {
        let tri = triangulate(&Polygon::unit_square(), 0.25).unwrap();
        let g = WeightedGraph::from_triangulation(&tri).unwrap();
        let center = tri
            .points()
            .iter()
            .position(|p| (p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12)
            .unwrap();
        let b = ball(&g, center, 0.6);
        let brute: Vec<usize> = (0..g.num_vertices())
            .filter(|&y| distance(&g, center, y).unwrap() < 0.6)
            .collect();
        assert_eq!(b, brute);
        let all = ball(&g, 0, 100.0);
        assert_eq!(all.len(), g.num_vertices());
        assert!((volume(&g, 0, 100.0) - g.total_measure()).abs() < 1e-12);
    }
}
