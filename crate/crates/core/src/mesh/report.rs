use super::polygon::point_segment_distance;
use super::{cross, sub, Triangulation};
use std::collections::{BTreeMap, HashMap, HashSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// A vertex lies in the relative interior of a side of another triangle.
    HangingNode { vertex: usize },
    /// A side is used by more than two triangles.
    OvermultipliedEdge { a: usize, b: usize },
    /// A side used by a single triangle that is not on the polygon boundary.
    OpenInteriorEdge { a: usize, b: usize },
    DuplicateVertex { vertex: usize },
    DegenerateTriangle,
    /// Triangle areas do not add up to the polygon area.
    AreaMismatch,
    /// Boundary flag disagrees with the geometry.
    BoundaryFlag { vertex: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Offending triangle pair (`second` is `None` for single-triangle or
    /// global violations).
    pub first: Option<usize>,
    pub second: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularityReport {
    pub h: f64,
    pub sigma: f64,
    pub admissible: bool,
    pub violations: Vec<Violation>,
}

/// Mesh size, shape regularity and a full admissibility check.
///
/// Point identity uses coordinates snapped to a grid of spacing
/// `1e-12 · diam(Ω)`; hanging nodes are found with a uniform spatial hash.
pub fn regularity_report(tri: &Triangulation) -> RegularityReport {
    let h = tri.mesh_size();
    let sigma = tri.regularity();
    let domain = tri.domain();
    let tol = domain.tolerance();
    let pts = tri.points();
    let mut violations = Vec::new();

    let snap = |p: [f64; 2]| ((p[0] / tol).round() as i64, (p[1] / tol).round() as i64);
    let mut seen: HashMap<(i64, i64), usize> = HashMap::new();
    for (v, &p) in pts.iter().enumerate() {
        if seen.insert(snap(p), v).is_some() {
            violations.push(Violation {
                kind: ViolationKind::DuplicateVertex { vertex: v },
                first: None,
                second: None,
            });
        }
    }

    for (t, &[a, b, c]) in tri.triangles().iter().enumerate() {
        let z = cross(sub(pts[b], pts[a]), sub(pts[c], pts[a]));
        if z.abs() <= tol * tol {
            violations.push(Violation {
                kind: ViolationKind::DegenerateTriangle,
                first: Some(t),
                second: None,
            });
        }
    }

    // edge -> triangles using it
    let mut edge_use: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (t, tv) in tri.triangles().iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (tv[k], tv[(k + 1) % 3]);
            edge_use.entry((a.min(b), a.max(b))).or_default().push(t);
        }
    }

    // spatial hash of vertices
    let cell = (h / 2.0).max(tol);
    let key = |p: [f64; 2]| ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (v, &p) in pts.iter().enumerate() {
        grid.entry(key(p)).or_default().push(v);
    }
    let mut explained: HashSet<(usize, usize)> = HashSet::new();
    let mut reported: HashSet<(usize, usize)> = HashSet::new();
    for (&(a, b), users) in &edge_use {
        let (pa, pb) = (pts[a], pts[b]);
        let (ka, kb) = (key(pa), key(pb));
        let mut on_edge = Vec::new();
        for i in ka.0.min(kb.0)..=ka.0.max(kb.0) {
            for j in ka.1.min(kb.1)..=ka.1.max(kb.1) {
                if let Some(vs) = grid.get(&(i, j)) {
                    for &v in vs {
                        if v != a && v != b && point_segment_distance(pts[v], pa, pb) <= tol {
                            on_edge.push(v);
                        }
                    }
                }
            }
        }
        if on_edge.is_empty() {
            continue;
        }
        on_edge.sort_unstable();
        on_edge.dedup();
        let mut chain = on_edge.clone();
        chain.push(a);
        chain.push(b);
        for (i, &p) in chain.iter().enumerate() {
            for &q in &chain[i + 1..] {
                explained.insert((p.min(q), p.max(q)));
            }
        }
        for &v in &on_edge {
            let t_edge = users[0];
            if !reported.insert((t_edge, v)) {
                continue;
            }
            let t_vertex = tri
                .triangles()
                .iter()
                .position(|tv| tv.contains(&v) && tv.iter().any(|&w| chain.contains(&w) && w != v));
            violations.push(Violation {
                kind: ViolationKind::HangingNode { vertex: v },
                first: Some(t_edge),
                second: t_vertex,
            });
        }
    }

    for (&(a, b), users) in &edge_use {
        if users.len() > 2 {
            violations.push(Violation {
                kind: ViolationKind::OvermultipliedEdge { a, b },
                first: Some(users[0]),
                second: Some(users[1]),
            });
        } else if users.len() == 1 && !explained.contains(&(a, b)) {
            let same_side = match (domain.boundary_side(pts[a]), domain.boundary_side(pts[b])) {
                (Some(_), Some(_)) => {
                    let m = [0.5 * (pts[a][0] + pts[b][0]), 0.5 * (pts[a][1] + pts[b][1])];
                    domain.on_boundary(m)
                }
                _ => false,
            };
            if !same_side {
                violations.push(Violation {
                    kind: ViolationKind::OpenInteriorEdge { a, b },
                    first: Some(users[0]),
                    second: None,
                });
            }
        }
    }

    let area = tri.total_area();
    if (area - domain.area()).abs() > 1e-12 * domain.area() {
        violations.push(Violation {
            kind: ViolationKind::AreaMismatch,
            first: None,
            second: None,
        });
    }

    for (v, &p) in pts.iter().enumerate() {
        if tri.is_boundary(v) != domain.on_boundary(p) {
            violations.push(Violation {
                kind: ViolationKind::BoundaryFlag { vertex: v },
                first: None,
                second: None,
            });
        }
    }

    RegularityReport {
        h,
        sigma,
        admissible: violations.is_empty(),
        violations,
    }
}
