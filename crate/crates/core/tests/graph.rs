use meyers_core::graph::*;
use meyers_core::mesh::{structured_rectangle, Polygon};
use meyers_core::spaces::{gradient_length, lp_norm, maximal_function, VertexFunction};
use meyers_core::Exec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Connected random graph: a random spanning path plus extra chords.
fn random_graph(n: usize, extra: usize, seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        seen.insert((j, i));
        edges.push((j, i, rng.gen_range(0.2..3.0), rng.gen_range(0.1..2.0)));
    }
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let key = (a.min(b), a.max(b));
        if a != b && seen.insert(key) {
            edges.push((key.0, key.1, rng.gen_range(0.2..3.0), rng.gen_range(0.1..2.0)));
        }
    }
    WeightedGraph::new(n, &edges, &[]).unwrap()
}

fn floyd(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let n = g.num_vertices();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (x, row) in d.iter_mut().enumerate() {
        row[x] = 0.0;
    }
    for e in g.edges() {
        d[e.a][e.b] = d[e.a][e.b].min(e.h);
        d[e.b][e.a] = d[e.b][e.a].min(e.h);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn shortest_paths_match_floyd(n in 2usize..25, extra in 0usize..40, seed in 0u64..10_000) {
        let g = random_graph(n, extra, seed);
        let oracle = floyd(&g);
        for x in 0..n {
            let d = dijkstra(&g, x, f64::INFINITY);
            for y in 0..n {
                prop_assert!((d[y] - oracle[x][y]).abs() <= 1e-12 * oracle[x][y].max(1.0));
            }
        }
    }

    #[test]
    fn metric_axioms(n in 2usize..20, extra in 0usize..30, seed in 0u64..10_000) {
        let g = random_graph(n, extra, seed);
        let d: Vec<Vec<f64>> = (0..n).map(|x| dijkstra(&g, x, f64::INFINITY)).collect();
        for x in 0..n {
            prop_assert_eq!(d[x][x], 0.0);
            for y in 0..n {
                prop_assert!((d[x][y] - d[y][x]).abs() <= 1e-12 * d[x][y].max(1.0));
                if x != y {
                    prop_assert!(d[x][y] > 0.0);
                }
                for z in 0..n {
                    prop_assert!(d[x][z] <= d[x][y] + d[y][z] + 1e-12);
                }
            }
        }
    }

    #[test]
    fn small_balls_are_singletons(n in 2usize..20, extra in 0usize..30, seed in 0u64..10_000, frac in 0.0f64..1.0) {
        let g = random_graph(n, extra, seed);
        let r = frac * g.min_weight();
        for x in 0..n {
            prop_assert_eq!(ball(&g, x, r), if r > 0.0 { vec![x] } else { vec![] });
            let closed = dijkstra(&g, x, f64::INFINITY).iter().filter(|&&d| d <= r).count();
            prop_assert_eq!(closed, 1);
        }
    }

    #[test]
    fn rescaling_identities(alpha in 0.1f64..10.0, seed in 0u64..10_000, p in 1.0f64..6.0) {
        let g = random_graph(12, 10, seed);
        let s = g.rescale(alpha).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = VertexFunction::from_values((0..12).map(|_| rng.gen_range(-1.0..1.0)).collect());
        let grad = gradient_length(&g, &f);
        let grad_s = gradient_length(&s, &f);
        for x in 0..12 {
            prop_assert!((grad_s.get(x) * alpha - grad.get(x)).abs() <= 1e-12 * grad.get(x).max(1.0));
            prop_assert!((s.m(x) - alpha * alpha * g.m(x)).abs() <= 1e-12 * s.m(x));
        }
        let ratio = lp_norm(&s, &f, p) / lp_norm(&g, &f, p);
        prop_assert!((ratio - alpha.powf(2.0 / p)).abs() <= 1e-10 * ratio);
        let d = dijkstra(&g, 0, f64::INFINITY);
        let ds = dijkstra(&s, 0, f64::INFINITY);
        for x in 0..12 {
            prop_assert!((ds[x] - alpha * d[x]).abs() <= 1e-12 * ds[x].max(1.0));
        }
    }

    #[test]
    fn maximal_function_matches_brute_force(n in 2usize..18, extra in 0usize..20, seed in 0u64..10_000) {
        let g = random_graph(n, extra, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = VertexFunction::from_values((0..n).map(|_| rng.gen_range(-2.0..2.0)).collect());
        let fast = maximal_function(&g, &f, Exec::Parallel);
        let mut brute = vec![0.0f64; n];
        for c in 0..n {
            let d = dijkstra(&g, c, f64::INFINITY);
            for &r in &d {
                let members: Vec<usize> = (0..n).filter(|&y| d[y] <= r).collect();
                let vol: f64 = members.iter().map(|&y| g.m(y)).sum();
                let avg = members.iter().map(|&y| f.get(y).abs() * g.m(y)).sum::<f64>() / vol;
                for &y in &members {
                    brute[y] = brute[y].max(avg);
                }
            }
        }
        for x in 0..n {
            prop_assert!((fast.get(x) - brute[x]).abs() <= 1e-12 * brute[x].max(1.0));
            prop_assert!(fast.get(x) >= f.get(x).abs() - 1e-12);
        }
    }

    #[test]
    fn poincare_constant_bounds_every_function(seed in 0u64..10_000) {
        let g = random_graph(15, 12, seed);
        let r = 2.5;
        let members = ball(&g, 0, r);
        prop_assume!(members.len() >= 2);
        let c = poincare_constant(&g, &members, r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..50 {
            let f = VertexFunction::from_values((0..15).map(|_| rng.gen_range(-1.0..1.0)).collect());
            let vol: f64 = members.iter().map(|&y| g.m(y)).sum();
            let mean = members.iter().map(|&y| f.get(y) * g.m(y)).sum::<f64>() / vol;
            let lhs: f64 = members.iter().map(|&y| (f.get(y) - mean).powi(2) * g.m(y)).sum();
            let grad = gradient_length(&g, &f);
            let rhs: f64 = members.iter().map(|&y| grad.get(y).powi(2) * g.m(y)).sum();
            prop_assert!(lhs <= c * r * r * rhs * (1.0 + 1e-9) + 1e-14);
        }
    }
}

#[test]
fn h_star_on_uniform_lattice_is_one() {
    let g = WeightedGraph::lattice_box(9, 9).unwrap();
    for y in [0, 10, 40, 80] {
        for x in [3, 22, 40, 77] {
            if x != y {
                assert_eq!(h_star(&g, x, y), 1.0);
            }
        }
    }
}

#[test]
fn h_star_sees_heavy_edges_near_the_ball() {
    // path 0 -1- 1 -1- 2 -5- 3: the heavy edge touches B(0, 2) only through
    // vertex 2, which is outside the strict ball
    let g = WeightedGraph::path(&[1.0, 1.0, 5.0]).unwrap();
    let strict = h_star(&g, 0, 2);
    assert_eq!(strict, 1.0);
    let closed = h_star_with(
        &g,
        0,
        2,
        HStarRule {
            ball: BallRule::Closed,
            touch: TouchRule::Either,
        },
    );
    assert_eq!(closed, 5.0);
}

#[test]
fn geometry_of_refined_meshes_is_stable() {
    let square = Polygon::unit_square();
    let mut prev: Option<GeometryReport> = None;
    for n in [8, 16, 32] {
        let tri = structured_rectangle(&square, n, n);
        let g = WeightedGraph::from_triangulation(&tri).unwrap();
        // radii r0/4 .. r0 cover the same number of mesh cells at every level
        let report = geometry_report(&g, 8.0 / n as f64, 12).unwrap();
        assert!(report.c_d >= 1.0 && report.c_d < 16.0);
        assert!(report.c_l > 0.0);
        assert!(report.c_p > 0.0 && report.c_p.is_finite());
        if let Some(p) = &prev {
            assert!(report.c_d / p.c_d < 2.0 && p.c_d / report.c_d < 2.0);
        }
        prev = Some(report);
    }
}

#[test]
fn graph_export_lists_every_vertex_and_edge() {
    let g = WeightedGraph::lattice_box(3, 2).unwrap();
    let text = write_graph(&g);
    assert_eq!(text.lines().filter(|l| l.starts_with("vertex")).count(), 6);
    assert_eq!(text.lines().filter(|l| l.starts_with("edge")).count(), 7);
}
