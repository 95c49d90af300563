use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use taumod::origami::{enumerate_origamis, sl2_orbits};
use taumod::teichcurve::{convergence_table, Calibration};
use taumod::Stratum;

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    for (s, d) in [("2", 5), ("1,1", 6), ("", 6)] {
        let stratum: Stratum = s.parse().unwrap();
        g.bench_with_input(BenchmarkId::new(stratum.to_string(), d), &d, |b, &d| {
            b.iter(|| sl2_orbits(&enumerate_origamis(d, &stratum).origamis))
        });
    }
    g.finish();
}

fn lyapunov_table(c: &mut Criterion) {
    let s: Stratum = "1,1".parse().unwrap();
    let cal = Calibration::default();
    c.bench_function("lyapunov H(1,1) d=4..6", |b| {
        b.iter(|| convergence_table(&s, 4..=6, &cal))
    });
}

criterion_group!(benches, enumeration, lyapunov_table);
criterion_main!(benches);
