use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tradenet_core::generate::random_flow_network;
use tradenet_core::reduce::{reduce_acyclic_bipartition, reduce_partition_to_instability, Digraph, PartitionInstance};
use tradenet_core::solve::{check, deferred_acceptance, find_blocking_set, Budget, Concept};
use tradenet_core::Outcome;

fn deferred(c: &mut Criterion) {
    let mut group = c.benchmark_group("deferred_acceptance");
    for firms in [6, 10, 14] {
        let nets: Vec<_> = (0..16).map(|seed| random_flow_network(seed, firms, 0.3).unwrap()).collect();
        group.bench_with_input(BenchmarkId::from_parameter(firms), &nets, |b, nets| {
            b.iter(|| {
                for net in nets {
                    black_box(deferred_acceptance(net).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn path_or_cycle_check(c: &mut Criterion) {
    let mut group = c.benchmark_group("pc_check_on_reduction");
    for n in [3, 5, 8] {
        let arcs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let d = Digraph::indexed(n, arcs).unwrap();
        let (net, map) = reduce_acyclic_bipartition(&d).unwrap();
        let a: Outcome = map.gadget_contracts.iter().map(|g| g.feed).collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &(net, a), |b, (net, a)| {
            b.iter(|| black_box(check(net, a, Concept::PathOrCycle, Budget::default()).unwrap()))
        });
    }
    group.finish();
}

fn partition_blocking_set(c: &mut Criterion) {
    let mut group = c.benchmark_group("partition_blocking_set");
    group.sample_size(10);
    for k in [4, 8, 12] {
        let weights: Vec<u64> = (1..=k as u64).map(|i| 2 * i + 1).collect();
        let red = reduce_partition_to_instability(&PartitionInstance::new(weights).unwrap()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(k), &red, |b, red| {
            b.iter(|| black_box(find_blocking_set(&red.network, &red.challenged, Budget::default()).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, deferred, path_or_cycle_check, partition_blocking_set);
criterion_main!(benches);
