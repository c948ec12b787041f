use std::hint::black_box;

use coupled_riemann::classifier::classify_grid;
use coupled_riemann::double_wave::{find_all_double_wave_with, ScanOptions};
use coupled_riemann::viscous::viscous_limit_study;
use coupled_riemann::{Execution, FluxFunction};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const POLICIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn quartic_scan(c: &mut Criterion) {
    let fm = FluxFunction::polynomial(vec![0.0, -1.0, -0.5, 0.0, 0.0625]);
    let fp = FluxFunction::polynomial(vec![0.5625, 0.25, -0.125, 0.25, 0.0625]);
    let mut g = c.benchmark_group("quartic_scan");
    g.sample_size(10);
    for (name, execution) in POLICIES {
        let opts = ScanOptions { scan_n: 1001, h_grid: 4001, envelope_n: 1024, execution, ..ScanOptions::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| find_all_double_wave_with(&fm, &fp, black_box(-2.5), black_box(1.5), &opts).unwrap())
        });
    }
    g.finish();
}

fn region_grid(c: &mut Criterion) {
    let mut g = c.benchmark_group("classify_grid");
    g.sample_size(10);
    for (name, execution) in POLICIES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| classify_grid(black_box(-1.0), [[-4.0, 3.0], [-4.0, 3.0]], 120, execution).unwrap())
        });
    }
    g.finish();
}

fn viscous_study(c: &mut Criterion) {
    let fm = FluxFunction::quadratic(0.0);
    let fp = FluxFunction::quadratic(-1.0);
    let mut g = c.benchmark_group("viscous_study");
    g.sample_size(10);
    for (name, execution) in POLICIES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| viscous_limit_study(&fm, &fp, -0.7, 0.1, &[0.2, 0.1, 0.05], 2000, None, execution).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, quartic_scan, region_grid, viscous_study);
criterion_main!(benches);
