use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use fwdest::{estimate, PayoffFunction, Schedules, StreamingEstimator, SymbolSequence};
use fwdest_bench::{order2_chain, sample};

fn push_throughput(c: &mut Criterion) {
    let chain = order2_chain();
    let mut group = c.benchmark_group("push");
    for &len in &[1usize << 12, 1 << 16, 1 << 20] {
        let data = sample(&chain, 1, len);
        group.throughput(Throughput::Elements(len as u64));
        group.bench_with_input(BenchmarkId::from_parameter(len), &data, |b, data| {
            b.iter(|| {
                let mut est = StreamingEstimator::new(chain.alphabet().clone(), Schedules::default(), len).unwrap();
                est.extend(data.iter().copied()).unwrap();
                est.stored_keys()
            })
        });
    }
    group.finish();
}

/// One estimate per prefix: the index answers from its tables, the scan
/// rereads the whole prefix.
fn incremental_vs_scan(c: &mut Criterion) {
    let chain = order2_chain();
    let g = PayoffFunction::indicator(1, 2).unwrap();
    let mut group = c.benchmark_group("estimate_every_prefix");
    group.sample_size(10);
    for &len in &[256usize, 1024, 4096] {
        let data = sample(&chain, 2, len);
        group.bench_with_input(BenchmarkId::new("streaming", len), &data, |b, data| {
            b.iter(|| {
                let mut est = StreamingEstimator::new(chain.alphabet().clone(), Schedules::default(), len).unwrap();
                let mut acc = 0.0;
                for &x in data {
                    est.push(x).unwrap();
                    acc += est.current_estimate(&g).unwrap().value;
                }
                acc
            })
        });
        group.bench_with_input(BenchmarkId::new("from_scratch", len), &data, |b, data| {
            b.iter(|| {
                let mut seq = SymbolSequence::with_capacity(chain.alphabet().clone(), len);
                let mut acc = 0.0;
                for (n, &x) in data.iter().enumerate() {
                    seq.push(x).unwrap();
                    acc += estimate(&seq, n, &g, &Schedules::default()).unwrap().value;
                }
                acc
            })
        });
    }
    group.finish();
}

criterion_group!(benches, push_throughput, incremental_vs_scan);
criterion_main!(benches);
