//! Experiment drivers: statistical checks of the expectation bounds that
//! relate K-cell functionals to the separation body, and of the exact
//! excess-volume identity and the conditional representation of the K-cell.
//!
//! Each check produces a machine-readable report. Bounds are computed
//! without Monte Carlo, so they are identical across reruns; the estimate
//! side carries a confidence interval, and the verdict is three-valued:
//! `pass` when the point estimate respects every bound, `inconclusive` when
//! only the CI-widened estimate does, `fail` otherwise.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::directional::{DirectionalDistribution, DistributionKind};
use crate::error::{Error, Result};
use crate::geometry::hull::area_2d;
use crate::geometry::{mean_width, VPolytope, Vector};
use crate::parallel;
use crate::poisson::{
    self, conditional_zero_cell, default_window_radius, integral_313, run_replications,
    IntegralGrid, ProcessParams,
};
use crate::sepbody::{boundary_ray, support_sepbody, SeparationQuery};
use crate::stats::{ks_two_sample, normal_quantile, EstimateWithCI};

pub const DEFAULT_CI_LEVEL: f64 = 0.99;
pub const DEFAULT_REPS_2D: usize = 10_000;
pub const DEFAULT_REPS_3D: usize = 3_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Machine-readable result of one check. Serialized reports are byte-stable
/// across reruns with the same seed; the wall-clock time is kept out of the
/// serialization for that reason.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub check: String,
    pub body: String,
    pub distribution: String,
    pub intensity: u32,
    pub probes: Vec<String>,
    pub lower_bound: Option<f64>,
    pub upper_bound: Option<f64>,
    pub estimate: f64,
    pub std_error: f64,
    pub ci_level: f64,
    pub ci_half_width: f64,
    pub n_reps: usize,
    pub seed: u64,
    /// Observed (estimate - reference) / (bound gap); recorded for later
    /// tightness exploration, nothing is asserted about it.
    pub observed_ratio: Option<f64>,
    pub details: BTreeMap<String, f64>,
    pub verdict: Verdict,
    #[serde(skip)]
    pub runtime_seconds: f64,
}

/// Labels and sampling budget of one check run.
#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub body_label: String,
    pub n_reps: usize,
    pub seed: u64,
    pub ci_level: f64,
}

impl CheckConfig {
    pub fn new(body_label: &str, n_reps: usize, seed: u64) -> Self {
        CheckConfig {
            body_label: body_label.to_string(),
            n_reps,
            seed,
            ci_level: DEFAULT_CI_LEVEL,
        }
    }
}

fn describe_dist(dist: &DirectionalDistribution) -> String {
    match dist.kind() {
        DistributionKind::ExactDiscrete => {
            format!("discrete({} atom pairs, d={})", dist.atoms().len(), dist.dim())
        }
        DistributionKind::Quadrature { order } => {
            format!("sigma-quadrature(order={}, d={})", order, dist.dim())
        }
        DistributionKind::FacetMeasure => {
            format!("facet-measure({} atom pairs, d={})", dist.atoms().len(), dist.dim())
        }
    }
}

fn fmt_dir(u: &Vector) -> String {
    u.as_slice()
        .iter()
        .map(|c| format!("{c}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Three-valued verdict for `lower <= estimate <= upper` with CI slack.
fn bound_verdict(
    estimate: f64,
    half_width: f64,
    lower: Option<f64>,
    upper: Option<f64>,
) -> Verdict {
    let mut point_ok = true;
    let mut ci_ok = true;
    if let Some(lo) = lower {
        if estimate < lo {
            point_ok = false;
        }
        if estimate + half_width < lo {
            ci_ok = false;
        }
    }
    if let Some(hi) = upper {
        if estimate > hi {
            point_ok = false;
        }
        if estimate - half_width > hi {
            ci_ok = false;
        }
    }
    if point_ok {
        Verdict::Pass
    } else if ci_ok {
        Verdict::Inconclusive
    } else {
        Verdict::Fail
    }
}

fn default_params(
    body: &VPolytope,
    dist: &DirectionalDistribution,
    intensity: u32,
    seed: u64,
) -> Result<ProcessParams> {
    ProcessParams::new(
        intensity,
        dist.clone(),
        default_window_radius(body, dist, intensity),
        seed,
    )
}

// ---------------------------------------------------------------------------
// Support-function bound (per direction)

/// Expectation bound for the support function in an atom direction `u`:
/// with `g = h(K[phi,1/n],u) - h(K,u)`, the mean cell support excess lies in
/// `[g/e, (1+1/e) g]`.
pub fn check_support_bound(
    body: &VPolytope,
    dist: &DirectionalDistribution,
    intensity: u32,
    u: &Vector,
    cfg: &CheckConfig,
) -> Result<TheoremReport> {
    check_support_bound_with_factors(
        body,
        dist,
        intensity,
        u,
        cfg,
        (-1.0f64).exp(),
        1.0 + (-1.0f64).exp(),
    )
}

/// Same check with configurable bound factors; the public entry uses
/// `(1/e, 1 + 1/e)`. A corrupted factor must turn the verdict into `fail`,
/// which the test suite uses as a harness sanity check.
pub fn check_support_bound_with_factors(
    body: &VPolytope,
    dist: &DirectionalDistribution,
    intensity: u32,
    u: &Vector,
    cfg: &CheckConfig,
    lower_factor: f64,
    upper_factor: f64,
) -> Result<TheoremReport> {
    let start = Instant::now();
    let un = u.normalized()?;
    if !dist.is_atom_direction(&un) {
        return Err(Error::InvalidParameter(
            "probe direction must be an atom of the distribution".into(),
        ));
    }
    let delta = 1.0 / intensity as f64;
    let q = SeparationQuery::new(body.clone(), dist.clone(), delta)?;
    let h_body = body.support(&un);
    let h_sep = support_sepbody(&q, &un)?;
    let gap = h_sep - h_body;

    let params = default_params(body, dist, intensity, cfg.seed)?;
    let records = run_replications(body, &params, cfg.n_reps, std::slice::from_ref(&un))?;
    let samples: Vec<f64> = records.iter().map(|r| r.h[0] - h_body).collect();
    let est = EstimateWithCI::from_samples(&samples, cfg.ci_level);

    let lower = lower_factor * gap;
    let upper = upper_factor * gap;
    let mut details = BTreeMap::new();
    details.insert("h_body".into(), h_body);
    details.insert("h_sepbody".into(), h_sep);
    details.insert("gap".into(), gap);
    Ok(TheoremReport {
        check: "support-bound".into(),
        body: cfg.body_label.clone(),
        distribution: describe_dist(dist),
        intensity,
        probes: vec![fmt_dir(&un)],
        lower_bound: Some(lower),
        upper_bound: Some(upper),
        estimate: est.mean,
        std_error: est.std_error,
        ci_level: cfg.ci_level,
        ci_half_width: est.half_width,
        n_reps: cfg.n_reps,
        seed: cfg.seed,
        observed_ratio: (gap > 0.0).then(|| est.mean / gap),
        details,
        verdict: bound_verdict(est.mean, est.half_width, Some(lower), Some(upper)),
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

// ---------------------------------------------------------------------------
// Mean-width bound

/// Mean width of the separation body `K[phi,delta]`, by the support-function
/// program at every quadrature node.
pub fn sepbody_mean_width(q: &SeparationQuery) -> Result<f64> {
    let atoms: Vec<Vector> = q
        .distribution()
        .expanded()
        .map(|(u, _)| u.clone())
        .collect();
    let weights: Vec<f64> = q.distribution().expanded().map(|(_, w)| w).collect();
    let supports: Vec<f64> = parallel::map_replications(atoms.len(), |i| {
        support_sepbody(q, &atoms[i])
    })?;
    Ok(2.0 * weights
        .iter()
        .zip(&supports)
        .map(|(w, h)| w * h)
        .sum::<f64>())
}

/// Expectation bound for the mean width: the mean cell width excess over
/// `W(K)` lies in `[g/e, (1+1/e) g]` with `g = W(K[phi,1/n]) - W(K)`.
pub fn check_width_bound(
    body: &VPolytope,
    dist: &DirectionalDistribution,
    intensity: u32,
    cfg: &CheckConfig,
) -> Result<TheoremReport> {
    let start = Instant::now();
    let delta = 1.0 / intensity as f64;
    let q = SeparationQuery::new(body.clone(), dist.clone(), delta)?;
    let w_body = mean_width(body, dist);
    let w_sep = sepbody_mean_width(&q)?;
    let gap = w_sep - w_body;

    let params = default_params(body, dist, intensity, cfg.seed)?;
    let records = run_replications(body, &params, cfg.n_reps, &[])?;
    let samples: Vec<f64> = records.iter().map(|r| r.width - w_body).collect();
    let est = EstimateWithCI::from_samples(&samples, cfg.ci_level);

    let e_inv = (-1.0f64).exp();
    let lower = e_inv * gap;
    let upper = (1.0 + e_inv) * gap;
    let mut details = BTreeMap::new();
    details.insert("w_body".into(), w_body);
    details.insert("w_sepbody".into(), w_sep);
    details.insert("gap".into(), gap);
    Ok(TheoremReport {
        check: "width-bound".into(),
        body: cfg.body_label.clone(),
        distribution: describe_dist(dist),
        intensity,
        probes: Vec::new(),
        lower_bound: Some(lower),
        upper_bound: Some(upper),
        estimate: est.mean,
        std_error: est.std_error,
        ci_level: cfg.ci_level,
        ci_half_width: est.half_width,
        n_reps: cfg.n_reps,
        seed: cfg.seed,
        observed_ratio: (gap > 0.0).then(|| est.mean / gap),
        details,
        verdict: bound_verdict(est.mean, est.half_width, Some(lower), Some(upper)),
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

// ---------------------------------------------------------------------------
// Volume lower bound

/// Volume of the separation body: boundary-ray sweep in the plane,
/// column-resolved membership grid in space.
pub fn sepbody_volume(q: &SeparationQuery, resolution: usize) -> Result<f64> {
    match q.dim() {
        2 => {
            let o = q.body().centroid();
            let rays = resolution.max(64);
            let pts: Vec<Vector> = parallel::map_replications(rays, |k| {
                let a = 2.0 * std::f64::consts::PI * (k as f64) / rays as f64;
                boundary_ray(q, &o, &Vector(vec![a.cos(), a.sin()]))
            })?;
            Ok(area_2d(&pts))
        }
        3 => {
            let cols = resolution.max(32);
            let mut lo = [0.0; 3];
            let mut hi = [0.0; 3];
            for i in 0..3 {
                let e = Vector::unit(3, i);
                hi[i] = support_sepbody(q, &e)? + 1e-9;
                lo[i] = -support_sepbody(q, &e.neg())? - 1e-9;
            }
            let sx = (hi[0] - lo[0]) / cols as f64;
            let sy = (hi[1] - lo[1]) / cols as f64;
            let heights: Vec<f64> = parallel::map_replications(cols, |iy| {
                let y = lo[1] + (iy as f64 + 0.5) * sy;
                let mut acc = 0.0;
                for ix in 0..cols {
                    let x = lo[0] + (ix as f64 + 0.5) * sx;
                    acc += column_height(q, x, y, lo[2], hi[2]);
                }
                Ok::<f64, Error>(acc)
            })?;
            Ok(heights.iter().sum::<f64>() * sx * sy)
        }
        d => Err(Error::InvalidParameter(format!(
            "separation body volume unsupported in dimension {d}"
        ))),
    }
}

/// Length of `{z : m(x,y,z) <= delta}`; `m` is convex along the column, so
/// the set is an interval found by a ternary/bisection search.
fn column_height(q: &SeparationQuery, x: f64, y: f64, z_lo: f64, z_hi: f64) -> f64 {
    let m_at = |z: f64| q.m(&Vector(vec![x, y, z]));
    // locate the minimum of the convex section
    let mut a = z_lo;
    let mut b = z_hi;
    for _ in 0..80 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if m_at(m1) <= m_at(m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    let z_min = 0.5 * (a + b);
    if m_at(z_min) > q.delta() {
        return 0.0;
    }
    // upper endpoint
    let mut lo = z_min;
    let mut hi = z_hi;
    if m_at(z_hi) <= q.delta() {
        // the body is clipped by the bounding box (cannot happen with the
        // support-derived box, kept as a guard)
        return z_hi - z_min + column_lower(q, x, y, z_lo, z_min);
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if m_at(mid) <= q.delta() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let top = 0.5 * (lo + hi);
    top - z_min + column_lower(q, x, y, z_lo, z_min)
}

fn column_lower(q: &SeparationQuery, x: f64, y: f64, z_lo: f64, z_min: f64) -> f64 {
    let m_at = |z: f64| q.m(&Vector(vec![x, y, z]));
    if m_at(z_lo) <= q.delta() {
        return z_min - z_lo;
    }
    let mut lo = z_lo;
    let mut hi = z_min;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if m_at(mid) <= q.delta() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    z_min - 0.5 * (lo + hi)
}

/// One-sided expectation bound for the volume: the mean cell volume excess
/// is at least `e^{-1} [V(K[phi,1/n]) - V(K)]`. No matching upper bound is
/// asserted.
pub fn check_volume_bound(
    body: &VPolytope,
    dist: &DirectionalDistribution,
    intensity: u32,
    cfg: &CheckConfig,
) -> Result<TheoremReport> {
    let start = Instant::now();
    let delta = 1.0 / intensity as f64;
    let q = SeparationQuery::new(body.clone(), dist.clone(), delta)?;
    let v_body = body.volume()?;
    let resolution = if body.dim() == 2 { 4096 } else { 160 };
    let v_sep = sepbody_volume(&q, resolution)?;
    let gap = v_sep - v_body;

    let params = default_params(body, dist, intensity, cfg.seed)?;
    let records = run_replications(body, &params, cfg.n_reps, &[])?;
    let samples: Vec<f64> = records.iter().map(|r| r.volume - v_body).collect();
    let est = EstimateWithCI::from_samples(&samples, cfg.ci_level);

    let lower = (-1.0f64).exp() * gap;
    let mut details = BTreeMap::new();
    details.insert("v_body".into(), v_body);
    details.insert("v_sepbody".into(), v_sep);
    details.insert("gap".into(), gap);
    Ok(TheoremReport {
        check: "volume-bound".into(),
        body: cfg.body_label.clone(),
        distribution: describe_dist(dist),
        intensity,
        probes: Vec::new(),
        lower_bound: Some(lower),
        upper_bound: None,
        estimate: est.mean,
        std_error: est.std_error,
        ci_level: cfg.ci_level,
        ci_half_width: est.half_width,
        n_reps: cfg.n_reps,
        seed: cfg.seed,
        observed_ratio: (gap > 0.0).then(|| est.mean / gap),
        details,
        verdict: bound_verdict(est.mean, est.half_width, Some(lower), None),
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

// ---------------------------------------------------------------------------
// Exact excess-volume identity

/// Cross-check of the exact identity: the Monte Carlo `E V(Z_K) - V(K)`
/// must agree with the deterministic integral of `exp(-n m)` over the
/// complement of `K`, within three combined standard errors.
pub fn check_excess_volume_identity(
    body: &VPolytope,
    dist: &DirectionalDistribution,
    intensity: u32,
    cfg: &CheckConfig,
) -> Result<TheoremReport> {
    let start = Instant::now();
    let v_body = body.volume()?;
    let integral = integral_313(body, dist, intensity, &IntegralGrid::default())?;

    let params = default_params(body, dist, intensity, cfg.seed)?;
    let records = run_replications(body, &params, cfg.n_reps, &[])?;
    let samples: Vec<f64> = records.iter().map(|r| r.volume - v_body).collect();
    let est = EstimateWithCI::from_samples(&samples, cfg.ci_level);

    let combined = 3.0 * (est.std_error + integral.error_estimate);
    let diff = (est.mean - integral.value).abs();
    let mut details = BTreeMap::new();
    details.insert("integral".into(), integral.value);
    details.insert("integral_error".into(), integral.error_estimate);
    details.insert("abs_difference".into(), diff);
    details.insert("tolerance".into(), combined);
    Ok(TheoremReport {
        check: "excess-volume-identity".into(),
        body: cfg.body_label.clone(),
        distribution: describe_dist(dist),
        intensity,
        probes: Vec::new(),
        lower_bound: Some(integral.value - combined),
        upper_bound: Some(integral.value + combined),
        estimate: est.mean,
        std_error: est.std_error,
        ci_level: cfg.ci_level,
        ci_half_width: est.half_width,
        n_reps: cfg.n_reps,
        seed: cfg.seed,
        observed_ratio: None,
        details,
        verdict: if diff <= combined {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

// ---------------------------------------------------------------------------
// Conditional representation of the K-cell

/// Distributional check of the conditional representation: zero cells
/// conditioned on containing `K` against directly sampled K-cells, compared
/// by two-sample KS tests on `h(Z,u0)`, `W(Z)` and `V(Z)`.
pub fn check_conditional_representation(
    body: &VPolytope,
    dist: &DirectionalDistribution,
    intensity: u32,
    n_accept: usize,
    cfg: &CheckConfig,
) -> Result<TheoremReport> {
    check_conditional_with_intensities(body, dist, intensity, intensity, n_accept, cfg)
}

/// Same check with separate intensities for the two samplers; a mismatch
/// must fail, which the test suite uses as a harness sanity check.
pub fn check_conditional_with_intensities(
    body: &VPolytope,
    dist: &DirectionalDistribution,
    intensity_conditional: u32,
    intensity_direct: u32,
    n_accept: usize,
    cfg: &CheckConfig,
) -> Result<TheoremReport> {
    let start = Instant::now();
    let u0 = dist.atoms()[0].u.clone();
    let radius = default_window_radius(body, dist, intensity_conditional.min(intensity_direct));
    let params_cond = ProcessParams::new(intensity_conditional, dist.clone(), radius, cfg.seed)?;
    let params_dir = ProcessParams::new(
        intensity_direct,
        dist.clone(),
        radius,
        cfg.seed ^ 0xd1b5_4a32_d192_ed03,
    )?;

    let conditional = conditional_zero_cell(body, &params_cond, n_accept)?;
    let mut cond_h = Vec::with_capacity(n_accept);
    let mut cond_w = Vec::with_capacity(n_accept);
    let mut cond_v = Vec::with_capacity(n_accept);
    for c in &conditional {
        cond_h.push(c.polytope.support(&u0));
        cond_w.push(mean_width(&c.polytope, dist));
        cond_v.push(c.polytope.volume()?);
    }
    let direct = run_replications(body, &params_dir, n_accept, &[])?;
    let mut dir_h = Vec::with_capacity(n_accept);
    for k in 0..n_accept {
        let mut rng = parallel::substream(params_dir.seed, k as u64);
        let s = poisson::sample_kcell_with_rng(body, &params_dir, &mut rng)?;
        dir_h.push(s.polytope.support(&u0));
    }
    let dir_w: Vec<f64> = direct.iter().map(|r| r.width).collect();
    let dir_v: Vec<f64> = direct.iter().map(|r| r.volume).collect();

    let (_, p_h) = ks_two_sample(&cond_h, &dir_h)?;
    let (_, p_w) = ks_two_sample(&cond_w, &dir_w)?;
    let (_, p_v) = ks_two_sample(&cond_v, &dir_v)?;
    let p_min = p_h.min(p_w).min(p_v);

    let mut details = BTreeMap::new();
    details.insert("p_support".into(), p_h);
    details.insert("p_width".into(), p_w);
    details.insert("p_volume".into(), p_v);
    details.insert(
        "acceptance_rate_model".into(),
        (-2.0 * intensity_conditional as f64 * dist.phi(body)).exp(),
    );
    Ok(TheoremReport {
        check: "conditional-representation".into(),
        body: cfg.body_label.clone(),
        distribution: describe_dist(dist),
        intensity: intensity_conditional,
        probes: vec![fmt_dir(&u0)],
        lower_bound: Some(0.01),
        upper_bound: None,
        estimate: p_min,
        std_error: 0.0,
        ci_level: cfg.ci_level,
        ci_half_width: 0.0,
        n_reps: n_accept,
        seed: cfg.seed,
        observed_ratio: None,
        details,
        verdict: if p_min > 0.01 {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Convenience: normal quantile used for CI widths in reports.
pub fn ci_z(level: f64) -> f64 {
    normal_quantile(0.5 + level / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> VPolytope {
        VPolytope::symmetric_box(2, 1.0).unwrap()
    }

    #[test]
    fn verdict_rules() {
        assert_eq!(bound_verdict(0.5, 0.1, Some(0.3), Some(0.8)), Verdict::Pass);
        assert_eq!(
            bound_verdict(0.25, 0.1, Some(0.3), Some(0.8)),
            Verdict::Inconclusive
        );
        assert_eq!(bound_verdict(0.1, 0.1, Some(0.3), Some(0.8)), Verdict::Fail);
        assert_eq!(
            bound_verdict(0.85, 0.1, Some(0.3), Some(0.8)),
            Verdict::Inconclusive
        );
        assert_eq!(bound_verdict(1.5, 0.1, Some(0.3), Some(0.8)), Verdict::Fail);
        // one-sided
        assert_eq!(bound_verdict(0.5, 0.1, Some(0.3), None), Verdict::Pass);
    }

    #[test]
    fn support_bound_small_run_passes() {
        let dist = DirectionalDistribution::sigma(2, 60).unwrap();
        let cfg = CheckConfig::new("square", 1500, 20260807);
        let r = check_support_bound(&square(), &dist, 5, &Vector::unit(2, 0), &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "report: {r:?}");
        // bounds are deterministic and ordered
        assert!(r.lower_bound.unwrap() < r.upper_bound.unwrap());
    }

    #[test]
    fn support_bound_corrupted_factor_fails() {
        let dist = DirectionalDistribution::sigma(2, 60).unwrap();
        let cfg = CheckConfig::new("square", 800, 3);
        let r = check_support_bound_with_factors(
            &square(),
            &dist,
            5,
            &Vector::unit(2, 0),
            &cfg,
            1.0f64.exp(), // e instead of 1/e
            2.0 * 1.0f64.exp(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn support_bound_rejects_non_atom_direction() {
        let dist = DirectionalDistribution::sigma(2, 8).unwrap();
        let cfg = CheckConfig::new("square", 10, 1);
        let u = Vector(vec![0.9, 0.1]);
        assert!(check_support_bound(&square(), &dist, 2, &u, &cfg).is_err());
    }

    #[test]
    fn sepbody_volume_square_axes_closed_form() {
        // axes measure, delta = 0.5: along e1 the body reaches 2, along the
        // diagonal m = (x1-1)_+ + ... gives straight edges between (2,±1)
        // and (±1,2): a square with chamfered corners
        let axes = DirectionalDistribution::discrete(&[
            (Vector::unit(2, 0), 1.0),
            (Vector::unit(2, 1), 1.0),
        ])
        .unwrap();
        let q = SeparationQuery::new(square(), axes, 0.5).unwrap();
        let v = sepbody_volume(&q, 8192).unwrap();
        // exact: core square 4, four side slabs 2x1 each, four corner
        // triangles of legs 1: total 4 + 8 + 2 = 14
        assert!((v - 14.0).abs() < 2e-3, "volume {v}");
    }

    #[test]
    fn report_serialization_is_stable() {
        let dist = DirectionalDistribution::sigma(2, 24).unwrap();
        let cfg = CheckConfig::new("square", 300, 8);
        let a = check_width_bound(&square(), &dist, 4, &cfg).unwrap();
        let b = check_width_bound(&square(), &dist, 4, &cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
