//! Sequential versus rayon sample farming on the same workloads.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use cube_times::par::{map_indexed, Execution};
use cube_times::stopping::{coupling_time_direct, prefix_return, self_return};
use cube_times::walk::derive_seed;

const STRATEGIES: [(&str, Execution); 2] =
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn coupling(c: &mut Criterion) {
    let (n, count) = (1024, 256u64);
    let mut group = c.benchmark_group("coupling_n1024");
    group.throughput(Throughput::Elements(count));
    for (name, exec) in STRATEGIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| map_indexed(count, exec, |i| coupling_time_direct(n, derive_seed(1, "bench", i))))
        });
    }
    group.finish();
}

fn self_intersection(c: &mut Criterion) {
    let (n, count) = (1000, 256u64);
    let mut group = c.benchmark_group("self_return_n1000");
    group.throughput(Throughput::Elements(count));
    for (name, exec) in STRATEGIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| map_indexed(count, exec, |i| self_return(n, derive_seed(2, "bench", i), 50 * n as u64)))
        });
    }
    group.finish();
}

fn set_return(c: &mut Criterion) {
    let (n, count) = (12, 64u64);
    let mut group = c.benchmark_group("set_return_n12");
    group.sample_size(10);
    group.throughput(Throughput::Elements(count));
    for (name, exec) in STRATEGIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| map_indexed(count, exec, |i| prefix_return(n, 0.5, derive_seed(3, "bench", i))))
        });
    }
    group.finish();
}

criterion_group!(benches, coupling, self_intersection, set_return);
criterion_main!(benches);
