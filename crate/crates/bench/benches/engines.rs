use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use jetnorm_core::cohomology::{ce_differential, differential_matrix, poisson_polynomial_module};
use jetnorm_core::liealg::catalog;
use jetnorm_core::normalform::{linearize_poisson, EngineOptions, Scheduler};
use jetnorm_core::polyalg::{pushforward, PoissonJet};
use jetnorm_core::sample::{random_cochain, random_near_identity};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn perturbed_so3(order: u32, seed: u64) -> PoissonJet {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let phi = random_near_identity(&mut r, 3, order);
    pushforward(&PoissonJet::linear(&catalog::so3(), order), &phi).unwrap()
}

fn linearize(c: &mut Criterion) {
    let pi = perturbed_so3(6, 1);
    let mut g = c.benchmark_group("linearize_so3_n6");
    g.sample_size(10);
    for sched in [Scheduler::Degree, Scheduler::Doubling] {
        let opts = EngineOptions::with_scheduler(sched);
        g.bench_function(format!("{sched:?}"), |b| b.iter(|| linearize_poisson(&pi, 6, &opts).unwrap()));
    }
    g.finish();
}

fn differential(c: &mut Criterion) {
    let module = poisson_polynomial_module(&catalog::sl2(), 3).shared();
    c.bench_function("differential_matrix_sl2_d3_r1", |b| b.iter(|| differential_matrix(&module, 1)));
    let mut r = ChaCha8Rng::seed_from_u64(2);
    c.bench_function("ce_differential_sl2_d3_r1", |b| {
        b.iter_batched(
            || random_cochain(&mut r, module.clone(), 1),
            |x| ce_differential(&x),
            BatchSize::SmallInput,
        )
    });
}

fn push(c: &mut Criterion) {
    let lin = PoissonJet::linear(&catalog::so3(), 6);
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let phi = random_near_identity(&mut r, 3, 6);
    c.bench_function("pushforward_so3_n6", |b| b.iter(|| pushforward(&lin, &phi).unwrap()));
}

criterion_group!(benches, linearize, differential, push);
criterion_main!(benches);
