//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line. Tolerances and sampling budgets are pinned here.
//!
//! Run with `cargo test -p sepbody-core --test acceptance -- --nocapture`
//! to see the per-criterion lines.

mod common;

use common::*;
use rand::Rng;

use sepbody_core::directional::DirectionalDistribution;
use sepbody_core::geometry::{Hyperplane, VPolytope, Vector};
use sepbody_core::parallel::{self, substream};
use sepbody_core::poisson::{
    default_window_radius, integral_313, run_replications, sample_hyperplanes, IntegralGrid,
    ProcessParams,
};
use sepbody_core::sepbody::{
    boundary_ray, ellipse_params, k_phi, m_value, psi_value, support_sepbody,
    support_sepbody_bisect, SeparationQuery,
};
use sepbody_core::stats::{poisson_gof_pvalue, EstimateWithCI};
use sepbody_core::verify::{
    check_conditional_representation, check_excess_volume_identity, check_support_bound,
    check_volume_bound, check_width_bound, CheckConfig, TheoremReport, Verdict,
};

fn report(criterion: &str, violations: &[String]) {
    if violations.is_empty() {
        println!("ACCEPTANCE {criterion}: PASS");
    } else {
        println!("ACCEPTANCE {criterion}: FAIL");
        for v in violations {
            println!("  - {v}");
        }
        panic!("acceptance criterion failed: {criterion}");
    }
}

fn check(violations: &mut Vec<String>, ok: bool, msg: String) {
    if !ok {
        violations.push(msg);
    }
}

#[test]
fn criterion_1_closed_form_agreement() {
    let mut violations = Vec::new();
    let body = square();
    let dist = axes2d();
    let e1 = Vector::unit(2, 0);

    let m = m_value(&body, &dist, &Vector(vec![2.0, 0.0]));
    check(&mut violations, (m - 0.5).abs() <= 1e-9, format!("m((2,0)) = {m}, expected 0.5"));

    let psi = psi_value(&Hyperplane::new(&e1, 2.0).unwrap(), &body, &dist).unwrap();
    check(
        &mut violations,
        (psi.value - 0.5).abs() <= 1e-9,
        format!("psi(H(e1,2)) = {}, expected 0.5", psi.value),
    );
    // 1D grid-search oracle at resolution 1e-4 along the hyperplane
    let mut oracle = f64::INFINITY;
    let mut t = -4.0;
    while t <= 4.0 {
        oracle = oracle.min(m_value(&body, &dist, &Vector(vec![2.0, t])));
        t += 1e-4;
    }
    check(
        &mut violations,
        (psi.value - oracle).abs() <= 2.0 * 1e-4 + 1e-9,
        format!("psi vs grid oracle: {} vs {oracle}", psi.value),
    );

    let q = SeparationQuery::new(body.clone(), dist.clone(), 0.5).unwrap();
    let h = support_sepbody(&q, &e1).unwrap();
    check(&mut violations, (h - 2.0).abs() <= 1e-9, format!("h(K[phi,0.5],e1) = {h}, expected 2"));
    // grid-search oracle at resolution 1e-4: max x with a member on the
    // axis section (m(x, .) is minimized at y = 0 for this symmetric body)
    let mut h_oracle = f64::NEG_INFINITY;
    let mut x = 1.9;
    while x <= 2.2 {
        if q.membership(&Vector(vec![x, 0.0])) {
            h_oracle = h_oracle.max(x);
        }
        x += 1e-4;
    }
    check(
        &mut violations,
        (h - h_oracle).abs() <= 2.0 * 1e-4,
        format!("support vs grid oracle: {h} vs {h_oracle}"),
    );

    let p = boundary_ray(&q, &Vector::zeros(2), &Vector(vec![1.0, 1.0])).unwrap();
    check(
        &mut violations,
        (p[0] - 1.5).abs() <= 1e-9 && (p[1] - 1.5).abs() <= 1e-9,
        format!("boundary ray along the diagonal = ({}, {}), expected (1.5, 1.5)", p[0], p[1]),
    );

    report("criterion 1 (closed-form agreement)", &violations);
}

#[test]
fn criterion_2_m_oracle_equivalence() {
    let mut violations = Vec::new();
    let n_samples = 1_000_000;
    let cases: Vec<usize> = (0..20).collect();
    let results: Vec<(f64, f64, f64)> = parallel::map_replications(cases.len(), |i| {
        let mut rng = substream(7_000 + i as u64, 0);
        let body = random_polygon(&mut rng, 5 + i % 5, 1.5);
        let dist = match i % 3 {
            0 => axes2d(),
            1 => DirectionalDistribution::sigma(2, 36).unwrap(),
            _ => {
                let pairs: Vec<(Vector, f64)> = (0..4)
                    .map(|_| (random_direction(&mut rng, 2), rng.gen_range(0.5..2.0)))
                    .collect();
                DirectionalDistribution::discrete(&pairs).unwrap()
            }
        };
        // mostly exterior points, some interior
        let x = if i % 5 == 4 {
            random_interior_point(&body, &mut rng)
        } else {
            Vector(vec![rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)])
        };
        let exact = m_value(&body, &dist, &x);
        let (mc, se) = mc_m_estimate(&body, &dist, &x, n_samples, 9_000 + i as u64);
        Ok::<(f64, f64, f64), sepbody_core::Error>((exact, mc, se))
    })
    .unwrap();
    for (i, (exact, mc, se)) in results.iter().enumerate() {
        check(
            &mut violations,
            (exact - mc).abs() <= 3.0 * se + 1e-12,
            format!("case {i}: m = {exact}, MC = {mc} +- {se}"),
        );
    }
    report("criterion 2 (m against the hyperplane-measure oracle)", &violations);
}

#[test]
fn criterion_3_property_suite() {
    let mut violations = Vec::new();
    let mut rng = substream(31_337, 0);
    let bodies = [square(), triangle(), random_polygon(&mut rng, 7, 1.2)];
    let dists = [axes2d(), DirectionalDistribution::sigma(2, 24).unwrap()];

    for body in &bodies {
        for dist in &dists {
            // convexity and Lipschitz-2 of m
            for _ in 0..1000 {
                let x = Vector(vec![rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)]);
                let y = Vector(vec![rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)]);
                let alpha: f64 = rng.gen_range(0.0..1.0);
                let mix = x.scaled(1.0 - alpha).add(&y.scaled(alpha));
                let lhs = m_value(body, dist, &mix);
                let rhs =
                    (1.0 - alpha) * m_value(body, dist, &x) + alpha * m_value(body, dist, &y);
                check(&mut violations, lhs <= rhs + 1e-12, format!("convexity: {lhs} > {rhs}"));
                let dm = (m_value(body, dist, &x) - m_value(body, dist, &y)).abs();
                check(
                    &mut violations,
                    dm <= 2.0 * x.distance(&y) + 1e-12,
                    format!("Lipschitz: {dm} > 2*{}", x.distance(&y)),
                );
                if !violations.is_empty() {
                    break;
                }
            }
            // m vanishes on the body
            for _ in 0..1000 {
                let inside = random_interior_point(body, &mut rng);
                let m = m_value(body, dist, &inside);
                check(&mut violations, m <= 1e-12, format!("m = {m} at an interior point"));
                if !violations.is_empty() {
                    break;
                }
            }
            // psi monotone (strictly, once positive) along atom normals
            let u = dist.atoms()[0].u.clone();
            let h0 = body.support(&u);
            let mut prev = 0.0;
            for k in 1..=8 {
                let tau = h0 + 0.3 * k as f64;
                let psi = psi_value(&Hyperplane::new(&u, tau).unwrap(), body, dist)
                    .unwrap()
                    .value;
                check(
                    &mut violations,
                    psi >= prev - 1e-10,
                    format!("psi not monotone: {psi} after {prev}"),
                );
                if prev > 1e-10 {
                    check(
                        &mut violations,
                        psi > prev + 1e-10,
                        format!("psi not strictly increasing: {psi} after {prev}"),
                    );
                }
                prev = psi;
            }
            // route agreement at every atom direction
            let q = SeparationQuery::new(body.clone(), dist.clone(), 0.35).unwrap();
            for atom in dist.atoms() {
                for u in [atom.u.clone(), atom.u.neg()] {
                    let a = support_sepbody(&q, &u).unwrap();
                    let b = support_sepbody_bisect(&q, &u).unwrap();
                    check(
                        &mut violations,
                        (a - b).abs() <= 1e-7,
                        format!("route disagreement at an atom direction: {a} vs {b}"),
                    );
                }
            }
            // K[phi,0] = K_phi on random points
            let q0 = SeparationQuery::new(body.clone(), dist.clone(), 0.0).unwrap();
            let kp = k_phi(body, dist).unwrap();
            for _ in 0..10_000 {
                let x = Vector(vec![rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)]);
                let by_m = q0.membership(&x);
                let by_halfspace = kp.contains(&x, 1e-9);
                // skip the measure-zero boundary shell where the two
                // tolerances disagree by construction
                let margin = m_value(body, dist, &x);
                if margin > 1e-8 || by_halfspace != by_m {
                    check(
                        &mut violations,
                        by_m == by_halfspace,
                        format!("K[phi,0] disagrees with K_phi at ({}, {})", x[0], x[1]),
                    );
                }
                if !violations.is_empty() {
                    break;
                }
            }
        }
    }
    report("criterion 3 (property suite)", &violations);
}

#[test]
fn criterion_4_elliptic_arcs() {
    let mut violations = Vec::new();
    let body = square();
    let dist = DirectionalDistribution::sigma(2, 360).unwrap();
    let delta = 0.3;
    let q = SeparationQuery::new(body.clone(), dist.clone(), delta).unwrap();
    let e = ellipse_params(&body, &Vector(vec![3.0, 0.0]), delta, &dist).unwrap();
    // rays whose boundary points stay in the east region
    let mut sums = Vec::new();
    for k in 0..50 {
        let angle = -0.3 + 0.6 * (k as f64) / 49.0;
        let p = boundary_ray(&q, &Vector::zeros(2), &Vector(vec![angle.cos(), angle.sin()]))
            .unwrap();
        assert!(p[0] > 1.0 && p[1].abs() < 1.0, "boundary point left the region");
        sums.push(p.distance(&e.focus_p) + p.distance(&e.focus_q));
    }
    let max = sums.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = sums.iter().cloned().fold(f64::INFINITY, f64::min);
    check(
        &mut violations,
        max - min <= 1e-4,
        format!("focal-sum spread {} exceeds 1e-4", max - min),
    );
    report("criterion 4 (elliptic arcs)", &violations);
}

#[test]
fn criterion_5_excess_volume_identity() {
    let mut violations = Vec::new();
    let cfg = CheckConfig::new("square", 30_000, 20260810);
    let r = check_excess_volume_identity(&square(), &axes2d(), 4, &cfg).unwrap();
    check(
        &mut violations,
        r.verdict == Verdict::Pass,
        format!(
            "identity check: estimate {} vs integral {} (tolerance {})",
            r.estimate, r.details["integral"], r.details["tolerance"]
        ),
    );
    report("criterion 5 (excess-volume identity, n = 4, 30k replications)", &violations);
}

fn run_bound_suite(
    name: &str,
    reports: Vec<TheoremReport>,
    max_inconclusive: usize,
) {
    let mut violations = Vec::new();
    let fails = reports
        .iter()
        .filter(|r| r.verdict == Verdict::Fail)
        .count();
    let inconclusive = reports
        .iter()
        .filter(|r| r.verdict == Verdict::Inconclusive)
        .count();
    for r in &reports {
        if r.verdict != Verdict::Pass {
            violations.push(format!(
                "{} {} n={} probes={:?}: {:?} (estimate {}, bounds {:?}..{:?})",
                r.check, r.body, r.intensity, r.probes, r.verdict, r.estimate, r.lower_bound,
                r.upper_bound
            ));
        }
    }
    if fails == 0 && inconclusive <= max_inconclusive {
        println!(
            "ACCEPTANCE {name}: PASS ({} reports, {inconclusive} inconclusive)",
            reports.len()
        );
    } else {
        println!("ACCEPTANCE {name}: FAIL");
        for v in &violations {
            println!("  - {v}");
        }
        panic!("acceptance criterion failed: {name}");
    }
}

#[test]
fn criterion_6_support_function_bounds() {
    let dist = DirectionalDistribution::sigma(2, 360).unwrap();
    let probes: Vec<Vector> = [0.0, std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_2,
        3.0 * std::f64::consts::FRAC_PI_4]
        .iter()
        .map(|a| Vector(vec![a.cos(), a.sin()]))
        .collect();
    let mut reports = Vec::new();
    for (label, body) in [("square", square()), ("triangle", triangle())] {
        for n in [1u32, 5, 20] {
            for u in &probes {
                let cfg = CheckConfig::new(label, 10_000, 606_000 + n as u64);
                reports.push(check_support_bound(&body, &dist, n, u, &cfg).unwrap());
            }
        }
    }
    run_bound_suite(
        "criterion 6 (support-function bounds, 24 configurations)",
        reports,
        1,
    );
}

#[test]
fn criterion_7_width_and_volume_bounds() {
    let dist = DirectionalDistribution::sigma(2, 360).unwrap();
    let mut width_reports = Vec::new();
    let mut volume_reports = Vec::new();
    for (label, body) in [("square", square()), ("triangle", triangle())] {
        for n in [1u32, 5, 20] {
            let cfg = CheckConfig::new(label, 10_000, 707_000 + n as u64);
            width_reports.push(check_width_bound(&body, &dist, n, &cfg).unwrap());
            volume_reports.push(check_volume_bound(&body, &dist, n, &cfg).unwrap());
        }
    }
    // one spatial configuration
    let dist3 = DirectionalDistribution::sigma(3, 100).unwrap();
    let cfg3 = CheckConfig::new("cube", 3_000, 707_100);
    width_reports.push(check_width_bound(&cube(), &dist3, 5, &cfg3).unwrap());
    volume_reports.push(check_volume_bound(&cube(), &dist3, 5, &cfg3).unwrap());

    run_bound_suite(
        "criterion 7a (mean-width bounds, 7 configurations)",
        width_reports,
        1,
    );
    run_bound_suite(
        "criterion 7b (volume lower bounds, 7 configurations)",
        volume_reports,
        1,
    );
}

#[test]
fn criterion_8_poisson_law_and_conditioning() {
    let mut violations = Vec::new();
    // hyperplane counts against the restricted intensity measure
    let body = square();
    let dist = DirectionalDistribution::sigma(2, 16).unwrap();
    let n = 2u32;
    let radius = default_window_radius(&body, &dist, n);
    let mean = 2.0 * n as f64 * (radius - dist.phi(&body));
    let counts: Vec<u64> = parallel::map_replications(100_000, |k| {
        let mut rng = substream(808_080, k as u64);
        Ok::<u64, sepbody_core::Error>(
            sample_hyperplanes(&body, &dist, n, None, radius, &mut rng)
                .unwrap()
                .len() as u64,
        )
    })
    .unwrap();
    let p = poisson_gof_pvalue(&counts, mean).unwrap();
    check(
        &mut violations,
        p > 0.01,
        format!("count distribution fails the Poisson fit: p = {p}"),
    );

    // conditional representation of the K-cell
    let small = VPolytope::symmetric_box(2, 0.1).unwrap();
    let cfg = CheckConfig::new("small-square", 1_500, 818_181);
    let r = check_conditional_representation(&small, &dist, n, 1_500, &cfg).unwrap();
    check(
        &mut violations,
        r.verdict == Verdict::Pass,
        format!(
            "conditional KS: p_h = {}, p_w = {}, p_v = {}",
            r.details["p_support"], r.details["p_width"], r.details["p_volume"]
        ),
    );
    report("criterion 8 (Poisson law and conditioning)", &violations);
}

#[cfg(feature = "parallel")]
#[test]
fn criterion_9_determinism() {
    let mut violations = Vec::new();
    let dist = DirectionalDistribution::sigma(2, 60).unwrap();
    let run_in_pool = |threads: usize| -> (String, String) {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            let cfg = CheckConfig::new("square", 500, 909_090);
            let report =
                check_support_bound(&square(), &dist, 5, &Vector::unit(2, 0), &cfg).unwrap();
            let params = ProcessParams::new(
                5,
                dist.clone(),
                default_window_radius(&square(), &dist, 5),
                909_091,
            )
            .unwrap();
            let records = run_replications(&square(), &params, 256, &[Vector::unit(2, 0)])
                .unwrap();
            let dump: Vec<String> = records
                .iter()
                .map(|r| r.to_json_record(&[Vector::unit(2, 0)]).to_string())
                .collect();
            (
                serde_json::to_string(&report).unwrap(),
                dump.join("\n"),
            )
        })
    };
    let (report_1, dump_1) = run_in_pool(1);
    let (report_8, dump_8) = run_in_pool(8);
    let (report_again, dump_again) = run_in_pool(8);
    check(
        &mut violations,
        report_1 == report_8 && report_8 == report_again,
        "reports differ across thread counts or reruns".to_string(),
    );
    check(
        &mut violations,
        dump_1 == dump_8 && dump_8 == dump_again,
        "replication dumps differ across thread counts or reruns".to_string(),
    );
    // the deterministic integral too
    let a = integral_313(&square(), &axes2d(), 4, &IntegralGrid::default()).unwrap();
    let b = integral_313(&square(), &axes2d(), 4, &IntegralGrid::default()).unwrap();
    check(
        &mut violations,
        a.value.to_bits() == b.value.to_bits(),
        "integral changed between reruns".to_string(),
    );
    report("criterion 9 (determinism)", &violations);
}

#[cfg(not(feature = "parallel"))]
#[test]
fn criterion_9_determinism() {
    let mut violations = Vec::new();
    let dist = DirectionalDistribution::sigma(2, 60).unwrap();
    let cfg = CheckConfig::new("square", 500, 909_090);
    let a = serde_json::to_string(
        &check_support_bound(&square(), &dist, 5, &Vector::unit(2, 0), &cfg).unwrap(),
    )
    .unwrap();
    let b = serde_json::to_string(
        &check_support_bound(&square(), &dist, 5, &Vector::unit(2, 0), &cfg).unwrap(),
    )
    .unwrap();
    check(&mut violations, a == b, "reports differ across reruns".to_string());
    report("criterion 9 (determinism)", &violations);
}

// Width estimates reused by several criteria sanity-check the estimator
// itself: a dense process pins E W(Z_K) near W(K).
#[test]
fn estimator_sanity_dense_process() {
    let body = square();
    let dist = DirectionalDistribution::sigma(2, 36).unwrap();
    let params = ProcessParams::new(
        150,
        dist.clone(),
        default_window_radius(&body, &dist, 150),
        111,
    )
    .unwrap();
    let records = run_replications(&body, &params, 400, &[]).unwrap();
    let widths: Vec<f64> = records.iter().map(|r| r.width).collect();
    let est = EstimateWithCI::from_samples(&widths, 0.99);
    let w_body = sepbody_core::geometry::mean_width(&body, &dist);
    assert!(est.mean > w_body && est.mean < w_body + 0.3);
}
