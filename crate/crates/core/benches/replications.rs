//! Parallel vs sequential replication throughput for the K-cell sampler and
//! the membership integrand.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sepbody_core::directional::DirectionalDistribution;
use sepbody_core::geometry::{VPolytope, Vector};
use sepbody_core::parallel;
use sepbody_core::poisson::{default_window_radius, sample_kcell_with_rng, ProcessParams};
use sepbody_core::sepbody::SeparationQuery;

fn kcell_batch_seq(body: &VPolytope, params: &ProcessParams, reps: usize) -> f64 {
    let records = parallel::map_replications_seq(reps, |k| {
        let mut rng = parallel::substream(params.seed, k as u64);
        let s = sample_kcell_with_rng(body, params, &mut rng)?;
        s.polytope.volume()
    })
    .unwrap();
    records.iter().sum()
}

fn kcell_batch_par(body: &VPolytope, params: &ProcessParams, reps: usize) -> f64 {
    let records = parallel::map_replications(reps, |k| {
        let mut rng = parallel::substream(params.seed, k as u64);
        let s = sample_kcell_with_rng(body, params, &mut rng)?;
        s.polytope.volume()
    })
    .unwrap();
    records.iter().sum()
}

fn bench_kcell_replications(c: &mut Criterion) {
    let body = VPolytope::symmetric_box(2, 1.0).unwrap();
    let dist = DirectionalDistribution::sigma(2, 60).unwrap();
    let params = ProcessParams::new(5, dist, {
        let d = DirectionalDistribution::sigma(2, 60).unwrap();
        let b = VPolytope::symmetric_box(2, 1.0).unwrap();
        default_window_radius(&b, &d, 5)
    }, 42)
    .unwrap();

    let mut group = c.benchmark_group("kcell_replications");
    for reps in [64usize, 256] {
        group.bench_with_input(BenchmarkId::new("sequential", reps), &reps, |b, &r| {
            b.iter(|| kcell_batch_seq(&body, &params, r))
        });
        group.bench_with_input(BenchmarkId::new("parallel", reps), &reps, |b, &r| {
            b.iter(|| kcell_batch_par(&body, &params, r))
        });
    }
    group.finish();
}

fn bench_membership_scan(c: &mut Criterion) {
    let body = VPolytope::symmetric_box(2, 1.0).unwrap();
    let dist = DirectionalDistribution::sigma(2, 360).unwrap();
    let q = SeparationQuery::new(body, dist, 0.5).unwrap();
    let points: Vec<Vector> = (0..20_000)
        .map(|i| {
            let t = i as f64 / 20_000.0;
            Vector(vec![3.0 * (t * 12.9898).sin(), 3.0 * (t * 78.233).cos()])
        })
        .collect();

    let mut group = c.benchmark_group("membership_scan");
    group.bench_function("sequential", |b| {
        b.iter(|| points.iter().filter(|x| q.membership(x)).count())
    });
    group.bench_function("parallel", |b| {
        b.iter(|| {
            parallel::map_replications(points.len(), |i| {
                Ok::<bool, sepbody_core::Error>(q.membership(&points[i]))
            })
            .unwrap()
            .iter()
            .filter(|m| **m)
            .count()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_kcell_replications, bench_membership_scan);
criterion_main!(benches);
