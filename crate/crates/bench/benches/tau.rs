use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use taumod::hyperelliptic::{period_data, random_corpus, tau0_eval_with, TauOptions};
use taumod::specialfn::{theta, SiegelPoint, ThetaCharacteristic};
use taumod::tau_elliptic::{tau_genus1, EllipticPeriods};

fn genus1(c: &mut Criterion) {
    let p = EllipticPeriods::new(Complex64::new(1.0, 0.0), Complex64::new(0.3, 1.1)).unwrap();
    c.bench_function("tau genus 1", |b| b.iter(|| tau_genus1(&p, 1e-15).unwrap()));
}

fn theta_g1(c: &mut Criterion) {
    let sp = SiegelPoint::from_tau(Complex64::new(0.2, 0.9)).unwrap();
    let ch = ThetaCharacteristic::new(vec![1], vec![1]).unwrap();
    let v = [Complex64::new(0.1, 0.05)];
    c.bench_function("theta genus 1", |b| {
        b.iter(|| theta(&v, &sp, &ch, 1e-12).unwrap())
    });
}

fn genus2(c: &mut Criterion) {
    let el = random_corpus(1, 1).remove(0);
    let opts = TauOptions::default();
    c.bench_function("periods genus 2", |b| {
        b.iter(|| period_data(&el.curve, opts.quad_tol).unwrap())
    });
    let pd = period_data(&el.curve, opts.quad_tol).unwrap();
    c.bench_function("tau genus 2", |b| {
        b.iter(|| tau0_eval_with(&pd, &el.curve, &el.spec, &opts).unwrap())
    });
}

criterion_group!(benches, genus1, theta_g1, genus2);
criterion_main!(benches);
