use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use zcat_core::fincat::FinCat;
use zcat_core::fixtures;
use zcat_core::modular::{enumerate_fes, ModelLabeledCat};
use zcat_core::par;
use zcat_core::sheaf::{enumerate_presheaves, sheaf_check};
use zcat_core::site::{generate_topology, grothendieck_axiom_check};

const MODES: [(&str, bool); 2] = [("parallel", false), ("sequential", true)];

fn fes(c: &mut Criterion) {
    let source = Arc::new(fixtures::connected_groupoid(&["x", "y", "z", "w"], 1));
    let model = Arc::new(ModelLabeledCat::all_in_all(Arc::new(fixtures::connected_groupoid(&["A", "B"], 2))));
    let mut group = c.benchmark_group("enumerate_fes");
    for (name, seq) in MODES {
        par::force_sequential(seq);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| enumerate_fes(source.clone(), model.clone(), 10_000_000).unwrap())
        });
    }
    par::force_sequential(false);
    group.finish();
}

fn sheaves(c: &mut Criterion) {
    let site = fixtures::chain3();
    let cat: &FinCat = &site.category;
    let k = generate_topology(cat, &site.seeds).unwrap();
    let presheaves = enumerate_presheaves(cat, 2);
    let mut group = c.benchmark_group("sheaf_check");
    for (name, seq) in MODES {
        par::force_sequential(seq);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| presheaves.iter().filter(|f| sheaf_check(f, cat, &k).unwrap().is_sheaf()).count())
        });
    }
    par::force_sequential(false);
    group.finish();
}

fn topology(c: &mut Criterion) {
    let site = fixtures::opens3();
    let k = generate_topology(&site.category, &site.seeds).unwrap();
    let mut group = c.benchmark_group("grothendieck_axiom_check");
    group.sample_size(10);
    for (name, seq) in MODES {
        par::force_sequential(seq);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| grothendieck_axiom_check(&site.category, &k).unwrap())
        });
    }
    par::force_sequential(false);
    group.finish();
}

criterion_group!(benches, fes, sheaves, topology);
criterion_main!(benches);
