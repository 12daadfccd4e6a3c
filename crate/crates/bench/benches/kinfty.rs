use criterion::{black_box, criterion_group, criterion_main, Criterion};
use omegalam::kinf::{app, random_elem, stage_embed, verify_laws, LawSamples};
use omegalam::{gen, Kernel};

fn application(c: &mut Criterion) {
    let k = Kernel::standard();
    k.k2();
    let mut rng = gen::rng(3);
    let pairs: Vec<_> = (0..16)
        .map(|_| {
            let x = stage_embed(&k, 2, &random_elem(&k, &mut rng, 2), 3).unwrap();
            let y = stage_embed(&k, 1, &random_elem(&k, &mut rng, 1), 3).unwrap();
            (x, y)
        })
        .collect();
    c.bench_function("kinfty/app_depth3", |b| {
        b.iter(|| pairs.iter().map(|(x, y)| app(&k, black_box(x), black_box(y)).unwrap().depth()).sum::<usize>())
    });
}

fn enumerate(c: &mut Criterion) {
    let mut g = c.benchmark_group("kinfty/k2");
    g.sample_size(10);
    g.bench_function("enumerate", |b| b.iter(|| Kernel::standard().k2().map_or(0, |s| s.len())));
    g.finish();
}

fn laws(c: &mut Criterion) {
    let k = Kernel::standard();
    let mut g = c.benchmark_group("kinfty/verify_laws");
    g.sample_size(10);
    let samples = LawSamples { stage2_threads: 2, endomaps: 4, density: 4 };
    g.bench_function("depth2", |b| b.iter(|| verify_laws(&k, 2, samples, &mut gen::rng(0)).unwrap()));
    g.finish();
}

criterion_group!(benches, application, enumerate, laws);
criterion_main!(benches);
