use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use omegalam::front_seed::word_reduce;
use omegalam::{gen, Cell2Word};

fn words(len: usize) -> Vec<Cell2Word> {
    let mut rng = gen::rng(11);
    let mut out = Vec::new();
    while out.len() < 32 {
        let t = gen::term(&mut rng, 14, 2);
        let e = gen::walk(&mut rng, &t, 3);
        let w = gen::loop_word(&mut rng, &e, len, 2);
        // append the inverse so reduction has real cancellation work
        out.push(w.concat(&w.inverse()));
    }
    out
}

fn reduce(c: &mut Criterion) {
    let mut g = c.benchmark_group("word_reduce");
    for len in [4, 16, 64] {
        let ws = words(len);
        g.bench_with_input(BenchmarkId::from_parameter(len), &ws, |b, ws| {
            b.iter(|| ws.iter().map(|w| word_reduce(black_box(w)).unwrap().len()).sum::<usize>())
        });
    }
    g.finish();
}

criterion_group!(benches, reduce);
criterion_main!(benches);
