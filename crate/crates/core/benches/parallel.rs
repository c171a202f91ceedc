use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use meyers_core::elliptic::{build_operator, semigroup_kernel, ContourOptions, EdgeCoefficients};
use meyers_core::galerkin::{CoefficientField, P1System};
use meyers_core::graph::WeightedGraph;
use meyers_core::mesh::{structured_rectangle, Polygon};
use meyers_core::spaces::{holder_seminorm_with, maximal_function, HolderSampling, VertexFunction};
use meyers_core::Exec;
use num_complex::Complex64;
use std::hint::black_box;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn assembly(c: &mut Criterion) {
    let tri = structured_rectangle(&Polygon::unit_square(), 128, 128);
    let a = CoefficientField::checkerboard(1.0, 4.0, 4, (0.0, 0.0, 1.0, 1.0)).unwrap();
    let mut group = c.benchmark_group("p1_assembly");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| P1System::assemble(black_box(&tri), &a, exec).unwrap())
        });
    }
    group.finish();
}

fn holder(c: &mut Criterion) {
    let tri = structured_rectangle(&Polygon::unit_square(), 32, 32);
    let g = WeightedGraph::from_triangulation(&tri).unwrap();
    let f = VertexFunction::from_fn(&g, |x| ((x * 7919) % 101) as f64 / 101.0);
    let mut group = c.benchmark_group("holder_seminorm");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| holder_seminorm_with(&g, black_box(&f), 0.5, HolderSampling::Exact, exec).unwrap())
        });
    }
    group.finish();
}

fn contour(c: &mut Criterion) {
    let g = WeightedGraph::lattice_box(24, 24).unwrap();
    let coeffs = EdgeCoefficients::uniform(&g, Complex64::new(1.0, 0.0)).unwrap();
    let op = build_operator(&g, &coeffs).unwrap();
    let opts = ContourOptions::default();
    let mut group = c.benchmark_group("contour_kernel");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| semigroup_kernel(&op, 1.0, black_box(300), &opts, exec).unwrap())
        });
    }
    group.finish();
}

fn maximal(c: &mut Criterion) {
    let tri = structured_rectangle(&Polygon::unit_square(), 24, 24);
    let g = WeightedGraph::from_triangulation(&tri).unwrap();
    let f = VertexFunction::from_fn(&g, |x| ((x * 31) % 17) as f64);
    let mut group = c.benchmark_group("maximal_function");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| maximal_function(&g, black_box(&f), exec))
        });
    }
    group.finish();
}

criterion_group!(benches, assembly, holder, contour, maximal);
criterion_main!(benches);
