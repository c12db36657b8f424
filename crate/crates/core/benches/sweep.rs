//! Parallel vs sequential throughput on the data-parallel workloads: the
//! coupling-grid sweep (bound states + Sigma per point) and the integrated
//! sweep entry point the CLI uses. Run with `cargo bench -p abscat`.

use abscat::batch;
use abscat::mat2::C64;
use abscat::params::{Flux, LambdaParams};
use abscat::scattering::sigma;
use abscat::spectrum::find_bound_states;
use abscat::sweep::SweepSpec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn grid_cells(n: usize) -> Vec<(f64, f64, f64)> {
    let mut cells = Vec::with_capacity(n * n * 2);
    for i in 0..n {
        for j in 0..n {
            for l in 0..2 {
                cells.push((
                    -2.0 + 4.0 * i as f64 / (n - 1) as f64,
                    -2.0 + 4.0 * j as f64 / (n - 1) as f64,
                    l as f64,
                ));
            }
        }
    }
    cells
}

fn eval_cell(flux: Flux, &(u, v, w): &(f64, f64, f64)) -> (usize, f64) {
    let lam = LambdaParams::new(u, v, C64::new(w, 0.0));
    let report = find_bound_states(flux, &lam);
    let s = sigma(flux, &lam, 1.3).unwrap();
    (report.count, s.unitarity_deficit())
}

fn bench_grid_sweep(c: &mut Criterion) {
    let flux = Flux::new(0.37).unwrap();
    let mut group = c.benchmark_group("coupling_grid_sweep");
    for n in [8usize, 16] {
        let cells = grid_cells(n);
        group.bench_with_input(BenchmarkId::new("sequential", n), &cells, |b, cells| {
            b.iter(|| black_box(batch::map_sequential(cells, |cell| eval_cell(flux, cell))))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", n), &cells, |b, cells| {
            b.iter(|| black_box(batch::map_parallel(cells, |cell| eval_cell(flux, cell))))
        });
    }
    group.finish();
}

fn bench_sweep_spec(c: &mut Criterion) {
    // the integrated entry point the CLI uses (dispatches on the feature)
    let spec = SweepSpec {
        flux: Flux::new(0.5).unwrap(),
        u_values: (0..12).map(|i| -2.0 + i as f64 / 3.0).collect(),
        v_values: (0..12).map(|i| -2.0 + i as f64 / 3.0).collect(),
        w_values: vec![0.0, 0.7, 1.9],
        k: 1.0,
    };
    c.bench_function("sweep_spec_run", |b| b.iter(|| black_box(spec.run().unwrap())));
}

criterion_group!(benches, bench_grid_sweep, bench_sweep_spec);
criterion_main!(benches);
