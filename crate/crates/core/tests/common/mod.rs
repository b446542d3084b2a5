//! Shared fixtures and oracles for the integration suites.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use sepbody_core::directional::DirectionalDistribution;
use sepbody_core::geometry::{separates, Hyperplane, VPolytope, Vector};
use sepbody_core::parallel::substream;

pub fn square() -> VPolytope {
    VPolytope::symmetric_box(2, 1.0).unwrap()
}

pub fn triangle() -> VPolytope {
    VPolytope::full_dimensional(vec![
        Vector(vec![0.0, 0.0]),
        Vector(vec![1.0, 0.0]),
        Vector(vec![0.0, 1.0]),
    ])
    .unwrap()
}

pub fn cube() -> VPolytope {
    VPolytope::symmetric_box(3, 1.0).unwrap()
}

pub fn axes2d() -> DirectionalDistribution {
    DirectionalDistribution::discrete(&[(Vector::unit(2, 0), 1.0), (Vector::unit(2, 1), 1.0)])
        .unwrap()
}

pub fn axes3d() -> DirectionalDistribution {
    DirectionalDistribution::discrete(&[
        (Vector::unit(3, 0), 1.0),
        (Vector::unit(3, 1), 1.0),
        (Vector::unit(3, 2), 1.0),
    ])
    .unwrap()
}

/// Random convex polygon: hull of points drawn from a disk.
pub fn random_polygon(rng: &mut ChaCha8Rng, n_points: usize, radius: f64) -> VPolytope {
    loop {
        let pts: Vec<Vector> = (0..n_points)
            .map(|_| {
                Vector(vec![
                    rng.gen_range(-radius..radius),
                    rng.gen_range(-radius..radius),
                ])
            })
            .collect();
        if let Ok(p) = VPolytope::full_dimensional(pts) {
            if p.volume().unwrap() > 0.05 * radius * radius {
                return p;
            }
        }
    }
}

/// Random point in the body: convex combination of its vertices.
pub fn random_interior_point(body: &VPolytope, rng: &mut ChaCha8Rng) -> Vector {
    let verts = body.vertices();
    let mut weights: Vec<f64> = (0..verts.len()).map(|_| rng.gen_range(0.0..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let mut x = Vector::zeros(body.dim());
    for (v, w) in verts.iter().zip(&weights) {
        x = x.add(&v.scaled(*w));
    }
    x
}

pub fn random_direction(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    loop {
        let v = Vector((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect());
        if v.norm() > 0.1 {
            return v.normalized().unwrap();
        }
    }
}

/// Monte Carlo estimate of the separating-hyperplane measure: draw
/// hyperplanes from the directional measure restricted to a ball window
/// that contains both the body and the point, and count the weak
/// separators. Independent of the closed-form evaluation path.
pub fn mc_m_estimate(
    body: &VPolytope,
    dist: &DirectionalDistribution,
    x: &Vector,
    n_samples: usize,
    seed: u64,
) -> (f64, f64) {
    let mut rng = substream(seed, 0);
    let rho = 2.0 * body.max_vertex_norm().max(x.norm()) + 1.0;
    let tilt = vec![1.0; dist.atoms().len()];
    let sampler = dist.tilted_sampler(&tilt).unwrap();
    let mut hits = 0usize;
    for _ in 0..n_samples {
        let i = sampler.sample(&mut rng);
        let tau: f64 = rng.gen_range(-rho..rho);
        let hp = Hyperplane::new(&dist.atoms()[i].u, tau).unwrap();
        if separates(&hp, body, x, false) {
            hits += 1;
        }
    }
    // the window has directional mass 2 rho
    let q = hits as f64 / n_samples as f64;
    let estimate = 2.0 * rho * q;
    let se = 2.0 * rho * (q * (1.0 - q) / n_samples as f64).sqrt();
    (estimate, se)
}
