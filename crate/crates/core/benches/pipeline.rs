use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sqm_core::stimuli::gen_am;
use sqm_core::{Analyzer, AnalyzerConfig, Execution, Variant};

fn pipeline(c: &mut Criterion) {
    let x = gen_am(1000.0, 70.0, 1.0, 0.2, 60.0, 44_100.0).expect("stimulus");
    let mut group = c.benchmark_group("roughness_0.2s");
    group.sample_size(10);
    for variant in Variant::ALL {
        for exec in [Execution::Sequential, Execution::Parallel] {
            let analyzer = Analyzer::new(AnalyzerConfig::new(variant).with_execution(exec)).expect("analyzer");
            analyzer.sone_phon().expect("sone/phon map");
            group.bench_with_input(BenchmarkId::new(variant.short_name(), format!("{exec:?}")), &x, |b, x| {
                b.iter(|| analyzer.roughness(x).expect("roughness").value())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, pipeline);
criterion_main!(benches);
