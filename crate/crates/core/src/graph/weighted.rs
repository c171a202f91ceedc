use crate::mesh::Triangulation;
use crate::{Error, Result};

/// Undirected edge with `a < b`, length `h` and measure `mu`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub h: f64,
    pub mu: f64,
}

/// Connected weighted graph with symmetric edge lengths `h_xy`, symmetric
/// edge measures `μ_xy`, vertex measure `m(x) = Σ_{y∼x} μ_xy` and an optional
/// boundary set. Self-loops are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    /// `(neighbour, edge id)` sorted by neighbour
    adjacency: Vec<(usize, usize)>,
    measure: Vec<f64>,
    boundary: Vec<bool>,
    h_x: Vec<f64>,
    points: Option<Vec<[f64; 2]>>,
    max_degree: usize,
    weight_control: f64,
    measure_control: f64,
}

impl WeightedGraph {
    /// Builds and validates a graph from `(x, y, h_xy, μ_xy)` edges.
    pub fn new(n: usize, edges: &[(usize, usize, f64, f64)], boundary: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        let mut list: Vec<Edge> = Vec::with_capacity(edges.len());
        for &(x, y, h, mu) in edges {
            if x >= n || y >= n {
                return Err(Error::InvalidGraph(format!("edge ({x}, {y}) out of range")));
            }
            if x == y {
                return Err(Error::InvalidGraph(format!("self-loop at {x}")));
            }
            if !(h > 0.0 && h.is_finite()) || !(mu > 0.0 && mu.is_finite()) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({x}, {y}) needs positive weight and measure, got h = {h}, μ = {mu}"
                )));
            }
            list.push(Edge {
                a: x.min(y),
                b: x.max(y),
                h,
                mu,
            });
        }
        list.sort_by_key(|e| (e.a, e.b));
        if let Some(w) = list.windows(2).find(|w| (w[0].a, w[0].b) == (w[1].a, w[1].b)) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({}, {})", w[0].a, w[0].b)));
        }

        let mut degree = vec![0usize; n];
        for e in &list {
            degree[e.a] += 1;
            degree[e.b] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for x in 0..n {
            offsets[x + 1] = offsets[x] + degree[x];
        }
        let mut adjacency = vec![(0usize, 0usize); offsets[n]];
        let mut fill = offsets.clone();
        for (id, e) in list.iter().enumerate() {
            adjacency[fill[e.a]] = (e.b, id);
            fill[e.a] += 1;
            adjacency[fill[e.b]] = (e.a, id);
            fill[e.b] += 1;
        }
        for x in 0..n {
            adjacency[offsets[x]..offsets[x + 1]].sort_unstable();
        }

        let mut flags = vec![false; n];
        for &v in boundary {
            if v >= n {
                return Err(Error::InvalidGraph(format!("boundary vertex {v} out of range")));
            }
            flags[v] = true;
        }
        if !boundary.is_empty() && flags.iter().all(|&b| b) {
            return Err(Error::InvalidGraph("boundary must be a strict subset".into()));
        }

        let mut g = WeightedGraph {
            edges: list,
            offsets,
            adjacency,
            measure: Vec::new(),
            boundary: flags,
            h_x: Vec::new(),
            points: None,
            max_degree: 0,
            weight_control: 1.0,
            measure_control: 1.0,
        };
        g.refresh_constants();
        if n > 1 && !g.is_connected() {
            return Err(Error::InvalidGraph("graph is disconnected".into()));
        }
        Ok(g)
    }

    fn refresh_constants(&mut self) {
        let n = self.num_vertices();
        self.measure = (0..n)
            .map(|x| self.neighbors(x).map(|(_, e)| self.edges[e].mu).sum())
            .collect();
        self.h_x = (0..n)
            .map(|x| self.neighbors(x).map(|(_, e)| self.edges[e].h).fold(0.0, f64::max))
            .collect();
        self.max_degree = (0..n).map(|x| self.degree(x)).max().unwrap_or(0);
        let (mut cw, mut cmu) = (1.0f64, 1.0f64);
        for x in 0..n {
            let (mut hmin, mut hmax, mut mmin, mut mmax) =
                (f64::INFINITY, 0.0f64, f64::INFINITY, 0.0f64);
            for (_, e) in self.neighbors(x) {
                let e = self.edges[e];
                hmin = hmin.min(e.h);
                hmax = hmax.max(e.h);
                mmin = mmin.min(e.mu);
                mmax = mmax.max(e.mu);
            }
            if hmax > 0.0 {
                cw = cw.max(hmax / hmin);
                cmu = cmu.max(mmax / mmin);
            }
        }
        self.weight_control = cw;
        self.measure_control = cmu;
    }

    fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for (y, _) in self.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == n
    }

    /// Graph of a triangulation: mesh vertices and sides, `h_xy = |x − y|`,
    /// `μ_xy = h_xy²`, boundary `Γ_h ∩ ∂Ω`.
    pub fn from_triangulation(tri: &Triangulation) -> Result<Self> {
        let pts = tri.points();
        let edges: Vec<(usize, usize, f64, f64)> = tri
            .edges()
            .into_iter()
            .map(|(a, b)| {
                let h = crate::mesh::dist(pts[a], pts[b]);
                (a, b, h, h * h)
            })
            .collect();
        let mut g = WeightedGraph::new(tri.num_vertices(), &edges, &tri.boundary_vertices())?;
        g.points = Some(pts.to_vec());
        Ok(g)
    }

    /// `nx × ny` box of the square lattice: unit weights, unit edge
    /// measures, empty boundary. Vertex `(i, j)` has index `j·nx + i`.
    pub fn lattice_box(nx: usize, ny: usize) -> Result<Self> {
        let id = |i: usize, j: usize| j * nx + i;
        let mut edges = Vec::with_capacity(2 * nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                if i + 1 < nx {
                    edges.push((id(i, j), id(i + 1, j), 1.0, 1.0));
                }
                if j + 1 < ny {
                    edges.push((id(i, j), id(i, j + 1), 1.0, 1.0));
                }
            }
        }
        let mut g = WeightedGraph::new(nx * ny, &edges, &[])?;
        g.points = Some(
            (0..nx * ny)
                .map(|v| [(v % nx) as f64, (v / nx) as f64])
                .collect(),
        );
        Ok(g)
    }

    /// Path `0 − 1 − … − k` with the given edge lengths and unit measures.
    pub fn path(weights: &[f64]) -> Result<Self> {
        let edges: Vec<_> = weights
            .iter()
            .enumerate()
            .map(|(i, &h)| (i, i + 1, h, 1.0))
            .collect();
        WeightedGraph::new(weights.len() + 1, &edges, &[])
    }

    /// Same graph with another boundary set.
    pub fn with_boundary(&self, boundary: &[usize]) -> Result<Self> {
        let edges: Vec<_> = self.edges.iter().map(|e| (e.a, e.b, e.h, e.mu)).collect();
        let mut g = WeightedGraph::new(self.num_vertices(), &edges, boundary)?;
        g.points = self.points.clone();
        Ok(g)
    }

    /// `Γ_α`: weights `α h_xy`, measures `α² μ_xy`.
    pub fn rescale(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("scale α = {alpha} must be positive")));
        }
        let mut g = self.clone();
        let a2 = alpha * alpha;
        for e in &mut g.edges {
            e.h *= alpha;
            e.mu *= a2;
        }
        g.refresh_constants();
        Ok(g)
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Edge {
        self.edges[id]
    }

    /// Id of the edge joining `x` and `y`.
    pub fn edge_between(&self, x: usize, y: usize) -> Option<usize> {
        let adj = &self.adjacency[self.offsets[x]..self.offsets[x + 1]];
        adj.binary_search_by_key(&y, |&(z, _)| z).ok().map(|k| adj[k].1)
    }

    /// `(neighbour, edge id)` pairs of `x`, by increasing neighbour index.
    pub fn neighbors(&self, x: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency[self.offsets[x]..self.offsets[x + 1]].iter().copied()
    }

    pub fn degree(&self, x: usize) -> usize {
        self.offsets[x + 1] - self.offsets[x]
    }

    /// `m(x)`
    pub fn m(&self, x: usize) -> f64 {
        self.measure[x]
    }

    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    pub fn total_measure(&self) -> f64 {
        crate::exec::pairwise_sum(&self.measure)
    }

    /// `h_x = sup_{y∼x} h_xy`
    pub fn h_x(&self, x: usize) -> f64 {
        self.h_x[x]
    }

    /// `h = sup h_xy`
    pub fn max_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.h).fold(0.0, f64::max)
    }

    pub fn min_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.h).fold(f64::INFINITY, f64::min)
    }

    /// `N`: maximal degree.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `C_W`: largest ratio of two edge lengths incident to the same vertex.
    pub fn weight_control(&self) -> f64 {
        self.weight_control
    }

    /// Largest ratio of two edge measures incident to the same vertex.
    pub fn measure_control(&self) -> f64 {
        self.measure_control
    }

    pub fn is_boundary(&self, x: usize) -> bool {
        self.boundary[x]
    }

    pub fn boundary_flags(&self) -> &[bool] {
        &self.boundary
    }

    pub fn has_boundary(&self) -> bool {
        self.boundary.iter().any(|&b| b)
    }

    pub fn boundary_vertices(&self) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&x| self.boundary[x]).collect()
    }

    pub fn interior_vertices(&self) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&x| !self.boundary[x]).collect()
    }

    /// Vertex coordinates when the graph comes from a mesh or a lattice.
    pub fn points(&self) -> Option<&[[f64; 2]]> {
        self.points.as_deref()
    }

    /// `(min, max)` of `m(x) / h_x²` over all vertices.
    pub fn measure_bracket(&self) -> (f64, f64) {
        let ratios = (0..self.num_vertices()).map(|x| self.m(x) / (self.h_x(x) * self.h_x(x)));
        ratios.fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)))
    }
}
