use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ultraball::ballmap::{brute_force_exists_with, exists_ball_preserving_bijection};
use ultraball::exec::{map_range, Execution};
use ultraball::selfcheck::{corpus_space, disguise, run_selfcheck, SelfcheckConfig};
use ultraball::UltrametricSpace;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn selfcheck(c: &mut Criterion) {
    let mut group = c.benchmark_group("selfcheck");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = SelfcheckConfig {
            exec,
            ..SelfcheckConfig::new(7, 200, 7)
        };
        group.bench_function(name, |b| b.iter(|| black_box(run_selfcheck(&cfg))));
    }
    group.finish();
}

fn exhaustive_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("brute_force_exists");
    group.sample_size(10);
    let x = (0..).map(|i| corpus_space(3, i, 7)).find(|s| s.len() == 7).unwrap();
    let y = disguise(&x, 1);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 7), &(&x, &y), |b, (x, y)| {
            b.iter(|| black_box(brute_force_exists_with(x, y, 7, exec).unwrap()))
        });
    }
    group.finish();
}

fn pair_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("pair_batch");
    let pool: Vec<UltrametricSpace> = (0..60).map(|i| corpus_space(11, i, 40)).collect();
    let pairs: Vec<(usize, usize)> = (0..pool.len()).flat_map(|i| (i + 1..pool.len()).map(move |j| (i, j))).collect();
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                map_range(exec, pairs.len(), |k| {
                    let (i, j) = pairs[k];
                    exists_ball_preserving_bijection(&pool[i], &pool[j]).equivalent
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, selfcheck, exhaustive_search, pair_batch);
criterion_main!(benches);
