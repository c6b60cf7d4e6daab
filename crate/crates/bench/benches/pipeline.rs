use std::hint::black_box;

use commclosure_core::automata::{closure_dfa_boolean, counter, shuffle_product};
use commclosure_core::pipeline::{run_pipeline, PipelineOptions};
use criterion::{criterion_group, criterion_main, Criterion};

const INPUTS: &[(&str, &str)] = &[
    ("even", "b(aa|bb)*"),
    ("diagonal", "(ab)*"),
    ("nonempty", "ab(ab)*|a(a|ab)*|b(b|ab)*"),
    ("three_letters", "(aa)*(bb)*(ccc)*|a(bc)*"),
];

fn pipeline(c: &mut Criterion) {
    let opts = PipelineOptions::default();
    let mut g = c.benchmark_group("pipeline");
    for (name, regex) in INPUTS {
        g.bench_function(*name, |b| b.iter(|| run_pipeline(black_box(regex), &opts).unwrap()));
    }
    g.finish();
}

fn automata(c: &mut Criterion) {
    let r = run_pipeline("ab(ab)*|a(a|ab)*|b(b|ab)*", &PipelineOptions::default()).unwrap();
    let sys = r.artifacts.system.unwrap();
    let alphabet = r.artifacts.regex.alphabet;
    c.bench_function("boolean_composition", |b| {
        b.iter(|| closure_dfa_boolean(black_box(&sys), &alphabet).unwrap())
    });
    let raw = r.artifacts.dfa.unwrap();
    c.bench_function("minimize", |b| b.iter(|| black_box(&raw).minimize()));
    c.bench_function("shuffle_counters", |b| {
        b.iter(|| {
            let x = counter('a', 3, 4, |s| s == 0).unwrap();
            let y = counter('b', 2, 5, |s| s == 1).unwrap();
            let z = counter('c', 1, 3, |s| s == 2).unwrap();
            shuffle_product(&[x, y, z]).unwrap()
        })
    });
}

criterion_group!(benches, pipeline, automata);
criterion_main!(benches);
