use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use wcop::norms::{condition_suprema_with, GridParams};
use wcop::operators::taylor_truncation_with;
use wcop::par::Exec;
use wcop::symbols::{cocycle_sup_root, Holomorphic};
use wcop::{DiscGrid, MoebiusTransform, Polynomial, QuadratureRule, RationalSymbol, Space, WeightedCompositionOp};

const PATHS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn weight() -> RationalSymbol {
    RationalSymbol::polynomial(Polynomial::from_real(&[2.0, 1.0, 0.25]))
}

fn kernels(c: &mut Criterion) {
    let grid = DiscGrid::new(GridParams::default()).unwrap();
    let psi = MoebiusTransform::canonical_hyperbolic(0.5).unwrap();
    let u = weight();
    let rule = QuadratureRule::new(64, 256).unwrap();
    let op = WeightedCompositionOp::new(u.clone(), psi, Space::Bloch).unwrap();

    let mut g = c.benchmark_group("kernels");
    g.sample_size(20);
    for (name, exec) in PATHS {
        g.bench_with_input(BenchmarkId::new("grid_max", name), &exec, |b, &e| {
            b.iter(|| grid.max_over(e, |p| p.gap * u.derivative(p.z).norm()))
        });
        g.bench_with_input(BenchmarkId::new("condition_suprema", name), &exec, |b, &e| {
            b.iter(|| condition_suprema_with(&u, &psi, &grid, e).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("cocycle_root_n100", name), &exec, |b, &e| {
            b.iter(|| cocycle_sup_root(&u, &psi, black_box(100), &grid, e).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("quadrature", name), &exec, |b, &e| {
            b.iter(|| rule.integrate(e, |z| u.derivative(z).norm_sqr()))
        });
        g.bench_with_input(BenchmarkId::new("taylor_truncation_128", name), &exec, |b, &e| {
            b.iter(|| taylor_truncation_with(&op, black_box(128), e).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
