use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qhmetric::estimators::{estimate_semisolid, estimate_weak_qs};
use qhmetric::qhgraph::{comparison_check, PairSpec};
use qhmetric::scenarios::Builtin;
use qhmetric::MapSpec;
use qhmetric_bench::{builtin_mesh, halfplane_pairs, halfplane_spec};

fn mesh_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("mesh_build");
    g.sample_size(10);
    for grading in [0.2, 0.1] {
        g.bench_function(format!("halfplane_g{grading}"), |b| {
            b.iter(|| builtin_mesh(Builtin::HalfPlane, black_box(grading)))
        });
    }
    g.bench_function("frame_omega_g0.1", |b| {
        b.iter(|| builtin_mesh(Builtin::FrameOmega, black_box(0.1)))
    });
    g.finish();
}

fn queries(c: &mut Criterion) {
    let mesh = builtin_mesh(Builtin::HalfPlane, 0.1);
    let pairs = halfplane_pairs(32);
    c.bench_function("halfplane_distance_x32", |b| {
        b.iter(|| {
            pairs
                .iter()
                .map(|(x, y)| mesh.distance(*x, *y).unwrap().distance)
                .sum::<f64>()
        })
    });
}

fn estimators(c: &mut Criterion) {
    let mut g = c.benchmark_group("estimators");
    g.sample_size(10);
    let spec = halfplane_spec(200);
    g.bench_function("weak_qs_shear_200", |b| {
        b.iter(|| estimate_weak_qs(&MapSpec::HalfPlaneShear, black_box(&spec)).unwrap())
    });
    let mesh = builtin_mesh(Builtin::HalfPlane, 0.1);
    let spec = halfplane_spec(50);
    g.bench_function("semisolid_shear_50", |b| {
        b.iter(|| {
            estimate_semisolid(&MapSpec::HalfPlaneShear, &mesh, &mesh, black_box(&spec)).unwrap()
        })
    });
    let pairs = PairSpec {
        seed: 1,
        count: 60,
        window: Builtin::HalfPlane.window(),
    };
    g.bench_function("comparison_suite_60", |b| {
        b.iter(|| comparison_check(&mesh, black_box(&pairs), 0.05).unwrap())
    });
    g.finish();
}

criterion_group!(benches, mesh_build, queries, estimators);
criterion_main!(benches);
