use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use muchnik_core::{
    build_until_complete, ipc_check_bounded, iso_check, parse, search_pmorphism, upset_algebra,
    verify_brouwer, Poset, SyntheticAntichainModel,
};

fn algebra(c: &mut Criterion) {
    let tree = Poset::binary_tree(3);
    c.bench_function("upset_algebra tree(3)", |b| {
        b.iter(|| upset_algebra(black_box(&tree)).unwrap())
    });
    let alg = upset_algebra(&tree).unwrap().algebra;
    c.bench_function("verify_brouwer tree(3)", |b| {
        b.iter(|| verify_brouwer(black_box(&alg)))
    });
}

fn muchnik(c: &mut Criterion) {
    let diamond = Poset::from_labeled_pairs(
        &["b", "l", "r", "t"],
        &[("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")],
    )
    .unwrap();
    c.bench_function("iso_check diamond", |b| {
        b.iter(|| iso_check(black_box(&diamond)).unwrap())
    });
}

fn logic(c: &mut Criterion) {
    let mut g = c.benchmark_group("ipc");
    g.sample_size(10);
    for text in ["((p -> q) -> p) -> p", "(p -> q) | (q -> p)", "~~(p | ~p)"] {
        let f = parse(text).unwrap();
        g.bench_function(text, |b| {
            b.iter(|| ipc_check_bounded(black_box(&f), 3).unwrap())
        });
    }
    g.finish();
}

fn morphism(c: &mut Criterion) {
    let src = Poset::binary_tree(3);
    let tgt = Poset::binary_tree(2);
    c.bench_function("search_pmorphism tree(3) -> fork", |b| {
        b.iter(|| search_pmorphism(black_box(&src), black_box(&tgt)).unwrap())
    });
}

fn splitting(c: &mut Criterion) {
    c.bench_function("build_until_complete height 4", |b| {
        b.iter(|| {
            let m = SyntheticAntichainModel::shuffled(7, 8);
            build_until_complete(&m, 4, 10_000).unwrap()
        })
    });
}

criterion_group!(benches, algebra, muchnik, logic, morphism, splitting);
criterion_main!(benches);
