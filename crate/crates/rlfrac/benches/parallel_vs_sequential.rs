//! Parallel vs sequential throughput on the two data-parallel hot loops:
//! sampling a family over a time grid, and sweeping (t, s) residuals of
//! the resolvent equation. Build with default features so `map_collect`
//! fans out over rayon; `map_collect_seq` is the in-build sequential
//! baseline.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nalgebra::DMatrix;
use rlfrac::exec::{map_collect, map_collect_seq};
use rlfrac::family::{FamilyKind, FracOrder, RlFamily};
use rlfrac::gamma::gamma;
use rlfrac::linalg::Generator;

/// Tridiagonal stiffness-like generator, symmetric negative definite.
fn generator(dim: usize) -> Generator {
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = -2.0;
        if i + 1 < dim {
            m[(i, i + 1)] = 1.0;
            m[(i + 1, i)] = 1.0;
        }
    }
    Generator::from_real(m).unwrap()
}

fn family(dim: usize) -> RlFamily {
    RlFamily::new(
        FracOrder::new(1.5).unwrap(),
        generator(dim),
        FamilyKind::RiemannLiouville,
        1e-10,
    )
    .unwrap()
}

fn bench_grid_sampling(c: &mut Criterion) {
    let fam = family(8);
    let grid: Vec<f64> = (1..=256).map(|i| 2.0 * i as f64 / 256.0).collect();
    let mut group = c.benchmark_group("grid_sampling");
    group.sample_size(20);
    group.bench_with_input(BenchmarkId::new("parallel", grid.len()), &grid, |b, g| {
        b.iter(|| map_collect(g, |&t| fam.regular(t).unwrap()))
    });
    group.bench_with_input(BenchmarkId::new("sequential", grid.len()), &grid, |b, g| {
        b.iter(|| map_collect_seq(g, |&t| fam.regular(t).unwrap()))
    });
    group.finish();
}

fn bench_residual_sweep(c: &mut Criterion) {
    let fam = family(6);
    let alpha = 1.5;
    let ts: Vec<f64> = (1..=10).map(|i| 0.2 * i as f64).collect();
    let pairs: Vec<(f64, f64)> = ts
        .iter()
        .flat_map(|&t| ts.iter().map(move |&s| (t, s)))
        .collect();
    let inv_gamma = 1.0 / gamma(alpha - 1.0);

    let residual = |&(t, s): &(f64, f64)| -> f64 {
        let tt = fam.eval(t).unwrap();
        let ts_ = fam.eval(s).unwrap();
        let jt = fam.jalpha(t).unwrap();
        let js = fam.jalpha(s).unwrap();
        let lhs = &ts_ * &jt - &js * &tt;
        let rhs = &jt * (s.powf(alpha - 2.0) * inv_gamma) - &js * (t.powf(alpha - 2.0) * inv_gamma);
        (lhs - rhs).norm()
    };

    let mut group = c.benchmark_group("residual_sweep");
    group.sample_size(20);
    group.bench_with_input(BenchmarkId::new("parallel", pairs.len()), &pairs, |b, p| {
        b.iter(|| map_collect(p, residual))
    });
    group.bench_with_input(BenchmarkId::new("sequential", pairs.len()), &pairs, |b, p| {
        b.iter(|| map_collect_seq(p, residual))
    });
    group.finish();
}

criterion_group!(benches, bench_grid_sampling, bench_residual_sweep);
criterion_main!(benches);
