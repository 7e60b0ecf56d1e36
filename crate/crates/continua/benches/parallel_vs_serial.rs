//! Parallel vs sequential throughput on the exact-arithmetic hot paths.
//!
//! The same workloads run twice: once with the rayon pool (default) and once
//! with the sequential fallback forced via `exec::set_sequential(true)`. Run
//! with `cargo bench` (the `parallel` feature is on by default); with
//! `--no-default-features` both runs are sequential and should coincide.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use continua::exec;
use continua::net::FiniteNet;
use continua::point::SparsePoint;
use continua::presentation::Presentation;
use continua::rat::{int, rat};

/// A synthetic presentation whose points have growing sparse support, so the
/// sup-metric work per pair is nontrivial.
fn synthetic_presentation(n: usize) -> Presentation {
    let points: Vec<SparsePoint> = (0..n)
        .map(|i| {
            let pairs: Vec<(u32, continua::rat::Rat)> = (0..=(i % 7) as u32)
                .map(|c| (c, rat(i as i64 + c as i64 + 1, 2 * c as i64 + 3)))
                .collect();
            SparsePoint::from_pairs(pairs)
        })
        .collect();
    Presentation::new("bench synthetic".to_string(), points).unwrap()
}

fn bench_net_build(c: &mut Criterion) {
    let pres = synthetic_presentation(180);
    let mut group = c.benchmark_group("net_build_180");
    for (name, sequential) in [("parallel", false), ("sequential", true)] {
        group.bench_function(name, |b| {
            b.iter_batched(
                || sequential,
                |seq| {
                    exec::set_sequential(seq);
                    let net = FiniteNet::from_presentation(&pres, pres.len(), 0).unwrap();
                    exec::set_sequential(false);
                    assert_eq!(net.dist(0, 1) >= int(0), true);
                    net
                },
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

criterion_group!(benches, bench_net_build);
criterion_main!(benches);
