//! Sequential against rayon-parallel sweeps: randomized Jacobi trials on one
//! structure and the divergence span of a two-dimensional trivector.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use varcalc::exec::Exec;
use varcalc::frontend::{jacobi_trial, trial_triple, ProblemSpec};
use varcalc::poisson::PoissonCandidate;
use varcalc::tensors::{multivector_is_zero, sn_bracket_bivectors, Method, ZeroOptions};

fn policies() -> [(&'static str, Exec); 2] {
    [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)]
}

fn jacobi_trials(c: &mut Criterion) {
    let spec = ProblemSpec::from_corpus("kdv2").unwrap();
    let p = PoissonCandidate::new(spec.operator.clone()).unwrap();
    let tri = sn_bracket_bivectors(p.operator(), p.operator()).unwrap();
    let mut group = c.benchmark_group("jacobi_trials_kdv2");
    group.sample_size(10);
    for (name, exec) in policies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| exec.map_range(8, |i| jacobi_trial(&p, &tri, &trial_triple(&spec.space, 1, i)).unwrap()))
        });
    }
    group.finish();
}

fn span_zero_test(c: &mut Criterion) {
    let spec = ProblemSpec::from_corpus("fluid2d").unwrap();
    let tri = sn_bracket_bivectors(&spec.operator, &spec.operator).unwrap();
    let mut group = c.benchmark_group("span_fluid2d");
    group.sample_size(20);
    for (name, exec) in policies() {
        let opts = ZeroOptions { method: Method::Span, exec, ..ZeroOptions::default() };
        group.bench_function(name, |b| b.iter(|| multivector_is_zero(&tri, &opts).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, jacobi_trials, span_zero_test);
criterion_main!(benches);
