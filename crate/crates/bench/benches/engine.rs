use criterion::{black_box, criterion_group, criterion_main, Criterion};
use prophet_core::mc::{simulate, SimConfig};
use prophet_core::prophet::{expected_max, Instance};
use prophet_core::random::{random_instance, rng_for};
use prophet_core::signaling::best_response;
use prophet_core::{Dist, Policy, Profile};

fn engine(c: &mut Criterion) {
    let inst = random_instance(&mut rng_for(1, 0));
    let iid = Instance::iid(&Dist::uniform(0.0, 1.0).unwrap(), 64).unwrap();
    c.bench_function("expected_max_random", |b| b.iter(|| expected_max(black_box(&inst))));
    c.bench_function("expected_max_iid64_uniform", |b| {
        b.iter(|| expected_max(black_box(&iid)))
    });

    let mix = Dist::discrete(&[(0.0, 0.3), (0.5, 0.2), (2.0, 0.1)]).unwrap();
    let d = Dist::mixture(&[0.5, 0.5], &[mix, Dist::uniform(0.0, 3.0).unwrap()]).unwrap();
    c.bench_function("best_response", |b| {
        b.iter(|| best_response(black_box(&d), black_box(1.9)))
    });

    let profile = Profile::full_information(inst.boxes().to_vec()).unwrap();
    c.bench_function("simulate_10k", |b| {
        b.iter(|| simulate(Policy::Fixed(3.0), black_box(&profile), SimConfig::new(10_000, 7)).unwrap())
    });
}

criterion_group!(benches, engine);
criterion_main!(benches);
