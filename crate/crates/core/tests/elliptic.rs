use std::f64::consts::PI;

use meyers_core::elliptic::*;
use meyers_core::graph::WeightedGraph;
use meyers_core::spaces::{differential, VertexFunction};
use meyers_core::Exec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn random_complex(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn unit_box(n: usize) -> (WeightedGraph, EllipticOperator) {
    let g = WeightedGraph::lattice_box(n, n).unwrap();
    let coeffs = EdgeCoefficients::uniform(&g, c(1.0)).unwrap();
    let op = build_operator(&g, &coeffs).unwrap();
    (g, op)
}

/// `L = M^{-1/2} S M^{1/2}` with `S` symmetric; returns `(eigenvalues, Q, m)`.
fn symmetric_eigen(g: &WeightedGraph, op: &EllipticOperator) -> (DVector<f64>, DMatrix<f64>, Vec<f64>) {
    let n = g.num_vertices();
    let dense = op.matrix().to_dense();
    let m = g.measure().to_vec();
    let s = DMatrix::from_fn(n, n, |i, j| dense[i][j].re * m[i].sqrt() / m[j].sqrt());
    let s = (&s + s.transpose()) * 0.5;
    let eig = s.symmetric_eigen();
    (eig.eigenvalues, eig.eigenvectors, m)
}

/// Applies `φ(L)` through the eigendecomposition.
fn spectral_apply(
    (lam, q, m): &(DVector<f64>, DMatrix<f64>, Vec<f64>),
    phi: impl Fn(f64) -> Complex64,
    v: &[Complex64],
) -> Vec<Complex64> {
    let n = v.len();
    let w = DVector::from_fn(n, |i, _| v[i] * m[i].sqrt());
    let qc = q.map(c);
    let coef = qc.transpose() * w;
    let scaled = DVector::from_fn(n, |k, _| coef[k] * phi(lam[k]));
    let out = qc * scaled;
    (0..n).map(|i| out[i] / m[i].sqrt()).collect()
}

fn max_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |acc, (x, y)| acc.max((x - y).norm()))
}

#[test]
fn constants_are_annihilated() {
    let g = WeightedGraph::lattice_box(6, 5).unwrap();
    let coeffs = EdgeCoefficients::perturbed(&g, 0.3, 3).unwrap();
    let op = build_operator(&g, &coeffs).unwrap();
    let lu = op.apply(&vec![c(2.5); g.num_vertices()]);
    assert!(lu.iter().all(|z| z.norm() < 1e-13));
}

#[test]
fn form_identity_on_random_pairs() {
    let g = WeightedGraph::lattice_box(9, 7).unwrap();
    let coeffs = EdgeCoefficients::perturbed(&g, 0.3, 11).unwrap();
    let op = build_operator(&g, &coeffs).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let u = random_complex(g.num_vertices(), &mut rng);
        let v = random_complex(g.num_vertices(), &mut rng);
        // Σ_ordered c_xy du(x,y) conj(dv(x,y)) μ_xy, written out independently
        let mut direct = c(0.0);
        for (id, e) in g.edges().iter().enumerate() {
            let (cab, cba) = coeffs.values()[id];
            let du = (u[e.b] - u[e.a]) / e.h;
            let dv = (v[e.b] - v[e.a]) / e.h;
            direct += (cab + cba) * du * dv.conj() * e.mu;
        }
        let lhs = op.pairing(&u, &v);
        assert!((lhs - direct).norm() <= 1e-12 * direct.norm().max(1.0), "{lhs} vs {direct}");
        assert!((op.form(&u, &v) - direct).norm() <= 1e-12 * direct.norm().max(1.0));
    }
}

#[test]
fn ellipticity_with_exact_constant() {
    let g = WeightedGraph::lattice_box(7, 6).unwrap();
    let coeffs = EdgeCoefficients::perturbed(&g, 0.3, 2).unwrap();
    let delta = coeffs.delta_exact().unwrap();
    assert!(delta >= coeffs.delta_edge() - 1e-12);
    assert!(delta > 0.0);
    let op = build_operator(&g, &coeffs).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let u = random_complex(g.num_vertices(), &mut rng);
        let du = differential(&g, &VertexFunction::from_values(u.clone()));
        let energy: f64 = 2.0 * g.edges().iter().zip(du.values()).map(|(e, d)| d.norm_sqr() * e.mu).sum::<f64>();
        assert!(op.form(&u, &u).re >= delta * energy * (1.0 - 1e-10));
    }
}

#[test]
fn accretivity_of_symmetric_and_rotated_coefficients() {
    let (_, op) = unit_box(8);
    let report = accretivity_angle(&op, 200, 1);
    assert!(report.omega_hat < 1e-12);

    let g = WeightedGraph::lattice_box(8, 8).unwrap();
    let rot = EdgeCoefficients::uniform(&g, Complex64::from_polar(1.0, PI / 6.0)).unwrap();
    let op = build_operator(&g, &rot).unwrap();
    let report = accretivity_angle(&op, 200, 1);
    assert!((report.omega_hat - PI / 6.0).abs() < 1e-12);

    let pert = EdgeCoefficients::perturbed(&g, 0.3, 4).unwrap();
    let op = build_operator(&g, &pert).unwrap();
    let report = accretivity_angle(&op, 1000, 1);
    assert!(report.omega_hat > 0.0 && report.omega_hat < PI / 2.0);
    assert!(report.omega_hat <= report.omega_edge + 1e-12);
    assert!(SectorPoint::new(Complex64::from_polar(1.0, 3.0 * PI / 5.0), report.omega_hat).is_ok());
}

#[test]
fn resolvent_of_zero_is_zero() {
    let (g, op) = unit_box(6);
    let u = op.resolvent_solve(c(1.0), &vec![c(0.0); g.num_vertices()]).unwrap();
    assert!(u.iter().all(|z| z.norm() == 0.0));
}

#[test]
fn resolvent_matches_eigendecomposition() {
    let (g, op) = unit_box(12);
    let eig = symmetric_eigen(&g, &op);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let f: Vec<Complex64> = (0..g.num_vertices()).map(|_| c(rng.gen_range(-1.0..1.0))).collect();
    let u = op.resolvent_solve(c(1.0), &f).unwrap();
    let oracle = spectral_apply(&eig, |l| c(1.0 / (l + 1.0)), &f);
    assert!(max_dev(&u, &oracle) < 1e-10);
}

#[test]
fn resolvent_scaling_identity() {
    let g = WeightedGraph::lattice_box(16, 16).unwrap();
    let coeffs = EdgeCoefficients::perturbed(&g, 0.3, 6).unwrap();
    let op = build_operator(&g, &coeffs).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = random_complex(g.num_vertices(), &mut rng);
    for lambda in [4.0, 25.0, 100.0] {
        let u = op.resolvent_solve(c(lambda), &f).unwrap();
        let scaled = g.rescale(f64::sqrt(lambda)).unwrap();
        let op_s = build_operator(&scaled, &coeffs).unwrap();
        let g_data: Vec<Complex64> = f.iter().map(|z| z / lambda).collect();
        let v = op_s.resolvent_solve(c(1.0), &g_data).unwrap();
        let dev = max_dev(&u, &v);
        assert!(dev <= 1e-13, "λ = {lambda}: {dev:e}");
    }
}

#[test]
fn kernel_matches_dense_oracle() {
    let (g, op) = unit_box(16);
    let eig = symmetric_eigen(&g, &op);
    let y = 8 * 16 + 5;
    let mut delta = vec![c(0.0); g.num_vertices()];
    delta[y] = c(1.0);
    for t in [0.1, 1.0, 10.0] {
        let (col, dev) = semigroup_kernel(&op, t, y, &ContourOptions::default(), Exec::Parallel).unwrap();
        assert!(dev.unwrap() < 1e-8);
        let oracle: Vec<Complex64> = spectral_apply(&eig, |l| c((-t * l).exp()), &delta)
            .into_iter()
            .map(|z| z / g.m(y))
            .collect();
        assert!(max_dev(&col, &oracle) < 1e-8, "t = {t}");
    }
}

#[test]
fn complex_kernel_matches_matrix_exponential() {
    let g = WeightedGraph::lattice_box(10, 10).unwrap();
    let coeffs = EdgeCoefficients::perturbed(&g, 0.3, 9).unwrap();
    let op = build_operator(&g, &coeffs).unwrap();
    let dense = op.matrix().to_dense();
    let n = g.num_vertices();
    let y = 44;
    for t in [0.5, 2.0] {
        let e = DMatrix::from_fn(n, n, |i, j| dense[i][j] * (-t)).exp();
        let (col, _) = semigroup_kernel(&op, t, y, &ContourOptions::default(), Exec::Sequential).unwrap();
        let oracle: Vec<Complex64> = (0..n).map(|i| e[(i, y)] / g.m(y)).collect();
        assert!(max_dev(&col, &oracle) < 1e-8, "t = {t}");
    }
}

#[test]
fn kernel_mass_and_symmetry() {
    let (g, op) = unit_box(12);
    let opts = ContourOptions::default();
    let (a, b) = (3 * 12 + 4, 7 * 12 + 8);
    let (ka, _) = semigroup_kernel(&op, 1.5, a, &opts, Exec::Parallel).unwrap();
    let (kb, _) = semigroup_kernel(&op, 1.5, b, &opts, Exec::Parallel).unwrap();
    let mass: Complex64 = ka.iter().enumerate().map(|(x, k)| k * g.m(x)).sum();
    assert!((mass - c(1.0)).norm() < 1e-10);
    assert!((ka[b] - kb[a]).norm() < 1e-10);
}

#[test]
fn semigroup_property() {
    let g = WeightedGraph::lattice_box(12, 12).unwrap();
    let coeffs = EdgeCoefficients::perturbed(&g, 0.3, 12).unwrap();
    let op = build_operator(&g, &coeffs).unwrap();
    let opts = ContourOptions::default();
    let mut delta = vec![c(0.0); g.num_vertices()];
    delta[70] = c(1.0);
    for (t, s) in [(0.5, 0.5), (1.0, 2.0)] {
        let once = semigroup_apply(&op, t + s, &delta, &opts, Exec::Parallel).unwrap();
        let inner = semigroup_apply(&op, s, &delta, &opts, Exec::Parallel).unwrap();
        let twice = semigroup_apply(&op, t, &inner, &opts, Exec::Parallel).unwrap();
        assert!(max_dev(&once, &twice) < 1e-8);
    }
}

#[test]
fn sequential_and_parallel_kernels_agree() {
    let (_, op) = unit_box(10);
    let opts = ContourOptions::default();
    let (a, _) = semigroup_kernel(&op, 1.0, 45, &opts, Exec::Sequential).unwrap();
    let (b, _) = semigroup_kernel(&op, 1.0, 45, &opts, Exec::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn kernel_bounds_on_small_box() {
    let (g, op) = unit_box(20);
    let y = 10 * 20 + 10;
    let window: Vec<usize> = (0..g.num_vertices())
        .filter(|&v| (5..15).contains(&(v % 20)) && (5..15).contains(&(v / 20)))
        .collect();
    let tables: Vec<KernelTable> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&t| kernel_table(&op, t, y, Some(&window), &ContourOptions::default(), Exec::Parallel).unwrap())
        .collect();
    for table in &tables {
        for e in &table.entries {
            if e.x != y {
                assert_eq!(e.h_star, 1.0);
            }
        }
    }
    let report = kernel_bound_check(&g, &tables, 1.0).unwrap();
    let b = report.regime_b.unwrap();
    assert!(b.beta > 0.0 && b.pass_rate == 1.0);
    let h = report.holder.unwrap();
    assert!(h.eta > 0.0 && h.pass_rate == 1.0);
    let csv = tables[0].csv_rows(&report);
    assert_eq!(csv.lines().count(), window.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rescaled_operator_is_scaled(alpha in 0.2f64..5.0, seed in 0u64..1000) {
        let g = WeightedGraph::lattice_box(5, 4).unwrap();
        let coeffs = EdgeCoefficients::perturbed(&g, 0.3, seed).unwrap();
        let op = build_operator(&g, &coeffs).unwrap();
        let op_s = build_operator(&g.rescale(alpha).unwrap(), &coeffs).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_complex(g.num_vertices(), &mut rng);
        let a = op.apply(&u);
        let b = op_s.apply(&u);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x / (alpha * alpha) - y).norm() <= 1e-12 * x.norm().max(1.0));
        }
    }

    #[test]
    fn accretive_form_values(seed in 0u64..1000) {
        let g = WeightedGraph::lattice_box(5, 5).unwrap();
        let coeffs = EdgeCoefficients::perturbed(&g, 0.3, seed).unwrap();
        let op = build_operator(&g, &coeffs).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 77);
        let u = random_complex(g.num_vertices(), &mut rng);
        prop_assert!(op.form(&u, &u).re >= 0.0);
    }
}
