//! Stationary Poisson hyperplane process, K-cells, and the exact excess
//! volume integral.
//!
//! The process with intensity `n` and directional distribution `phi` is
//! sampled inside a ball window `B_R`: the number of hyperplanes hitting the
//! window but missing `K` is Poisson with mean `2n(R - Phi(K))`, directions
//! follow the atom weights tilted by the free offset length, and offsets are
//! uniform on the two-sided allowed interval. A cell that does not stay
//! strictly inside `B_R` is completed with an independent shell process on
//! `B_{2R} \ B_R` (Poisson superposition) rather than discarded, so the cell
//! law is exact.
//!
//! Replications use one master seed with an independent substream per
//! replication index, which makes estimates reproducible bit for bit under
//! any thread count.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use serde::Serialize;

use crate::directional::DirectionalDistribution;
use crate::error::{Error, Result};
use crate::geometry::clip;
use crate::geometry::lp;
use crate::geometry::{mean_width, HPolytope, Halfspace, Orientation, VPolytope, Vector};
use crate::parallel;
use crate::sepbody::SeparationQuery;
use crate::stats::EstimateWithCI;

/// Hard cap on window doublings before a sample is declared lost.
const MAX_DOUBLINGS: usize = 5;

/// Parameters of one K-cell experiment.
#[derive(Clone, Debug)]
pub struct ProcessParams {
    /// Intensity of the process (a positive integer, matching the `1/n`
    /// parameter of the separation-body bounds).
    pub intensity: u32,
    pub dist: DirectionalDistribution,
    pub window_radius: f64,
    pub seed: u64,
}

impl ProcessParams {
    pub fn new(
        intensity: u32,
        dist: DirectionalDistribution,
        window_radius: f64,
        seed: u64,
    ) -> Result<Self> {
        if intensity == 0 {
            return Err(Error::InvalidParameter(
                "process intensity must be a positive integer".into(),
            ));
        }
        if !(window_radius.is_finite() && window_radius > 0.0) {
            return Err(Error::InvalidParameter(
                "window radius must be positive".into(),
            ));
        }
        Ok(ProcessParams {
            intensity,
            dist,
            window_radius,
            seed,
        })
    }

    /// Checks that the window strictly contains the body in every atom
    /// direction.
    pub fn validate_for(&self, body: &VPolytope) -> Result<()> {
        for (u, _) in self.dist.expanded() {
            if body.support(u) >= self.window_radius {
                return Err(Error::InvalidParameter(format!(
                    "window radius {} does not exceed the body support {}",
                    self.window_radius,
                    body.support(u)
                )));
            }
        }
        Ok(())
    }
}

/// Heuristic default window: four body radii plus slack that grows as the
/// intensity drops (wide cells need room). Guarded by the shell
/// regeneration rule, so it only affects cost, not correctness.
pub fn default_window_radius(body: &VPolytope, dist: &DirectionalDistribution, intensity: u32) -> f64 {
    let max_support = dist
        .expanded()
        .map(|(u, _)| body.support(u))
        .fold(0.0f64, f64::max);
    4.0 * max_support + 8.0 / intensity as f64
}

/// One realization of the K-cell.
#[derive(Clone, Debug)]
pub struct KCellSample {
    /// Generating halfspaces (all containing `K`) plus the window facets.
    pub cell: HPolytope,
    /// Vertex form of the same cell.
    pub polytope: VPolytope,
    /// Always false on returned samples; window hits are repaired by shell
    /// superposition before the sample is released.
    pub hit_window: bool,
    /// Hyperplanes drawn in the initial window (the Poisson variate with
    /// mean `2n(R - Phi(K))`).
    pub count: usize,
    pub final_radius: f64,
    pub doublings: usize,
}

/// One hyperplane drawn from the restricted process, keeping the stored-atom
/// index and the signed offset along the stored direction.
#[derive(Clone, Debug)]
pub struct SampledHyperplane {
    pub atom_index: usize,
    /// Offset with respect to `+u_i`; negative values are hyperplanes on the
    /// far side of `K`.
    pub tau: f64,
    pub halfspace: Halfspace,
}

/// Draw all process hyperplanes that miss `body` and hit `B_{r_hi}` but not
/// `B_{r_lo}` (pass `r_lo = None` for the initial full window).
pub fn sample_hyperplanes(
    body: &VPolytope,
    dist: &DirectionalDistribution,
    intensity: u32,
    r_lo: Option<f64>,
    r_hi: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<SampledHyperplane>> {
    let atoms = dist.atoms();
    let mut len_plus = Vec::with_capacity(atoms.len());
    let mut len_minus = Vec::with_capacity(atoms.len());
    let mut tilt = Vec::with_capacity(atoms.len());
    for a in atoms {
        let floor_plus = match r_lo {
            Some(r) => body.support(&a.u).max(r),
            None => body.support(&a.u),
        };
        let floor_minus = match r_lo {
            Some(r) => body.support(&a.u.neg()).max(r),
            None => body.support(&a.u.neg()),
        };
        let lp = (r_hi - floor_plus).max(0.0);
        let lm = (r_hi - floor_minus).max(0.0);
        len_plus.push((floor_plus, lp));
        len_minus.push((floor_minus, lm));
        tilt.push(lp + lm);
    }
    // each stored atom stands for the antipodal pair, and the hyperplane
    // measure sees every geometric hyperplane through both parametrizations
    // (the same doubling that gives the body-hitting mass 2 Phi)
    let measure: f64 = atoms
        .iter()
        .zip(&tilt)
        .map(|(a, t)| 2.0 * a.w * t)
        .sum::<f64>()
        * intensity as f64;
    if measure <= 0.0 {
        return Ok(Vec::new());
    }
    let n_draws = rand_distr::Poisson::new(measure)
        .map_err(|e| Error::InvalidParameter(format!("poisson mean invalid: {e}")))?
        .sample(rng) as usize;
    let sampler = dist.tilted_sampler(&tilt)?;
    let mut out = Vec::with_capacity(n_draws);
    for _ in 0..n_draws {
        let i = sampler.sample(rng);
        let (fp, lp_) = len_plus[i];
        let (fm, lm_) = len_minus[i];
        let side_plus = rng.gen_range(0.0..lp_ + lm_) < lp_;
        let u = atoms[i].u.clone();
        let (tau, halfspace) = if side_plus {
            let t = fp + rng.gen_range(0.0..lp_);
            (
                t,
                Halfspace {
                    u: u.clone(),
                    tau: t,
                    orientation: Orientation::Le,
                },
            )
        } else {
            let t = fm + rng.gen_range(0.0..lm_);
            (
                -t,
                Halfspace {
                    u: u.clone(),
                    tau: -t,
                    orientation: Orientation::Ge,
                },
            )
        };
        out.push(SampledHyperplane {
            atom_index: i,
            tau,
            halfspace,
        });
    }
    Ok(out)
}

/// Sample the K-cell with the params' own seed (substream 0).
pub fn sample_kcell(body: &VPolytope, params: &ProcessParams) -> Result<KCellSample> {
    let mut rng = parallel::substream(params.seed, 0);
    sample_kcell_with_rng(body, params, &mut rng)
}

/// Sample the K-cell from the given stream. Degenerate vertex enumerations
/// (a probability-zero event hit through finite precision) are logged and
/// redrawn from the same stream.
pub fn sample_kcell_with_rng(
    body: &VPolytope,
    params: &ProcessParams,
    rng: &mut ChaCha8Rng,
) -> Result<KCellSample> {
    params.validate_for(body)?;
    let mut last_err = None;
    for attempt in 0..3 {
        match try_sample(body, params, rng) {
            Err(Error::DegenerateCell(msg)) => {
                eprintln!("degenerate cell on attempt {attempt} ({msg}); redrawing");
                last_err = Some(Error::DegenerateCell(msg));
            }
            other => return other,
        }
    }
    Err(last_err.unwrap())
}

fn try_sample(
    body: &VPolytope,
    params: &ProcessParams,
    rng: &mut ChaCha8Rng,
) -> Result<KCellSample> {
    let dim = body.dim();
    let mut radius = params.window_radius;
    let mut halfspaces: Vec<Halfspace> =
        sample_hyperplanes(body, &params.dist, params.intensity, None, radius, rng)?
            .into_iter()
            .map(|s| s.halfspace)
            .collect();
    let count = halfspaces.len();
    let mut doublings = 0;
    loop {
        let clipped = clip::halfspace_intersection(&halfspaces, dim, radius)?;
        if !clipped.window_active {
            let mut cell_hs = halfspaces;
            cell_hs.extend(clip::window_halfspaces(dim, radius)?);
            return Ok(KCellSample {
                cell: HPolytope::new(cell_hs, true)?,
                polytope: clipped.polytope,
                hit_window: false,
                count,
                final_radius: radius,
                doublings,
            });
        }
        if doublings == MAX_DOUBLINGS {
            return Err(Error::WindowExhausted(MAX_DOUBLINGS));
        }
        let grown = 2.0 * radius;
        halfspaces.extend(
            sample_hyperplanes(body, &params.dist, params.intensity, Some(radius), grown, rng)?
                .into_iter()
                .map(|s| s.halfspace),
        );
        radius = grown;
        doublings += 1;
    }
}

/// Zero cell: the K-cell of the one-point body at the origin.
pub fn sample_zero_cell(params: &ProcessParams) -> Result<KCellSample> {
    let mut rng = parallel::substream(params.seed, 0);
    sample_zero_cell_with_rng(params, &mut rng)
}

pub fn sample_zero_cell_with_rng(
    params: &ProcessParams,
    rng: &mut ChaCha8Rng,
) -> Result<KCellSample> {
    let origin = VPolytope::point(Vector::zeros(params.dist.dim()))?;
    sample_kcell_with_rng(&origin, params, rng)
}

// ---------------------------------------------------------------------------
// Replications and estimates

/// Functionals of one replicated cell.
#[derive(Clone, Debug, Serialize)]
pub struct RepRecord {
    pub seed_index: u64,
    pub count: usize,
    pub hit_window: bool,
    #[serde(rename = "V")]
    pub volume: f64,
    #[serde(rename = "W")]
    pub width: f64,
    pub h: Vec<f64>,
}

impl RepRecord {
    /// Dump format: probe directions keyed by their coordinates.
    pub fn to_json_record(&self, probes: &[Vector]) -> serde_json::Value {
        let mut h = BTreeMap::new();
        for (u, value) in probes.iter().zip(&self.h) {
            let key = u
                .as_slice()
                .iter()
                .map(|c| format!("{c}"))
                .collect::<Vec<_>>()
                .join(",");
            h.insert(key, *value);
        }
        serde_json::json!({
            "seed_index": self.seed_index,
            "count": self.count,
            "hit_window": self.hit_window,
            "V": self.volume,
            "W": self.width,
            "h": h,
        })
    }
}

/// Run independent replications; replication `k` uses substream `k` of the
/// master seed. Support probes go through the cell's linear program, width
/// and volume through the vertex form.
pub fn run_replications(
    body: &VPolytope,
    params: &ProcessParams,
    n_reps: usize,
    probes: &[Vector],
) -> Result<Vec<RepRecord>> {
    params.validate_for(body)?;
    parallel::map_replications(n_reps, |k| {
        let one = || -> Result<RepRecord> {
            let mut rng = parallel::substream(params.seed, k as u64);
            let sample = sample_kcell_with_rng(body, params, &mut rng)?;
            let mut h = Vec::with_capacity(probes.len());
            for u in probes {
                h.push(lp::lp_support_point(&sample.cell, u)?.value);
            }
            Ok(RepRecord {
                seed_index: k as u64,
                count: sample.count,
                hit_window: sample.hit_window,
                volume: sample.polytope.volume()?,
                width: mean_width(&sample.polytope, &params.dist),
                h,
            })
        };
        one().map_err(|e| Error::Replication {
            index: k,
            source: Box::new(e),
        })
    })
}

/// Monte Carlo estimates of `E h(Z_K, u)` per probe, `E W(Z_K)` and
/// `E V(Z_K)`.
#[derive(Clone, Debug, Serialize)]
pub struct FunctionalEstimates {
    pub per_probe: Vec<EstimateWithCI>,
    pub width: EstimateWithCI,
    pub volume: EstimateWithCI,
    pub n_reps: usize,
}

impl FunctionalEstimates {
    pub fn from_records(records: &[RepRecord], n_probes: usize, level: f64) -> Self {
        let per_probe = (0..n_probes)
            .map(|j| {
                let samples: Vec<f64> = records.iter().map(|r| r.h[j]).collect();
                EstimateWithCI::from_samples(&samples, level)
            })
            .collect();
        let widths: Vec<f64> = records.iter().map(|r| r.width).collect();
        let volumes: Vec<f64> = records.iter().map(|r| r.volume).collect();
        FunctionalEstimates {
            per_probe,
            width: EstimateWithCI::from_samples(&widths, level),
            volume: EstimateWithCI::from_samples(&volumes, level),
            n_reps: records.len(),
        }
    }
}

pub fn estimate_functionals(
    body: &VPolytope,
    params: &ProcessParams,
    n_reps: usize,
    probes: &[Vector],
    level: f64,
) -> Result<FunctionalEstimates> {
    let records = run_replications(body, params, n_reps, probes)?;
    Ok(FunctionalEstimates::from_records(&records, probes.len(), level))
}

// ---------------------------------------------------------------------------
// Exact excess-volume integral

/// Grid controls for [`integral_313`].
#[derive(Clone, Debug)]
pub struct IntegralGrid {
    /// Starting number of cells along the longest axis.
    pub base_resolution: usize,
    /// Richardson refinements (each halves the step).
    pub max_refinements: usize,
    /// Stop refining when successive values differ by less than
    /// `tol_rel * |value| + tol_abs`.
    pub tol_rel: f64,
    pub tol_abs: f64,
    /// Truncation threshold for `m`; the integrand is below `exp(-n T)`
    /// outside the separation body with this parameter. Default `20 / n`.
    pub tail_threshold: Option<f64>,
}

impl Default for IntegralGrid {
    fn default() -> Self {
        IntegralGrid {
            base_resolution: 160,
            max_refinements: 3,
            tol_rel: 1e-3,
            tol_abs: 1e-4,
            tail_threshold: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralResult {
    pub value: f64,
    /// Richardson difference of the last refinement plus the tail bound.
    pub error_estimate: f64,
    pub tail_bound: f64,
    pub resolution: usize,
}

/// The excess-volume identity integrand: integrates `exp(-n m(K,x))` over
/// the complement of `K`, truncated where `m > T` with a documented tail
/// bound. Equals `E V(Z_K) - V(K)` exactly for the untruncated integral.
pub fn integral_313(
    body: &VPolytope,
    dist: &DirectionalDistribution,
    intensity: u32,
    grid: &IntegralGrid,
) -> Result<IntegralResult> {
    let dim = body.dim();
    if dim != 2 && dim != 3 {
        return Err(Error::InvalidParameter(
            "excess-volume integral supports dimensions 2 and 3".into(),
        ));
    }
    let n = intensity as f64;
    let t_cut = grid.tail_threshold.unwrap_or(20.0 / n);
    let q = SeparationQuery::new(body.clone(), dist.clone(), t_cut)?;

    // bounding box of the truncated separation body
    let mut lo = vec![0.0; dim];
    let mut hi = vec![0.0; dim];
    for i in 0..dim {
        let e = Vector::unit(dim, i);
        hi[i] = crate::sepbody::support_sepbody(&q, &e)? + 1e-9;
        lo[i] = -crate::sepbody::support_sepbody(&q, &e.neg())? - 1e-9;
    }

    // Integrate the continuous integrand exp(-n m) over the whole box and
    // subtract the exact body volume: m vanishes on K, so the subtraction
    // removes the inside-K mass without a discontinuous membership factor.
    let v_body = body.volume()?;
    let longest = (0..dim).map(|i| hi[i] - lo[i]).fold(0.0f64, f64::max);

    let eval = |cells_longest: usize| -> f64 {
        let step = longest / cells_longest as f64;
        let counts: Vec<usize> = (0..dim)
            .map(|i| ((hi[i] - lo[i]) / step).ceil() as usize)
            .collect();
        let f = |x: &Vector| -> f64 { (-n * q.m(x)).exp() };
        match dim {
            2 => {
                let rows: Vec<f64> = parallel::map_replications(counts[1], |iy| {
                    let y = lo[1] + (iy as f64 + 0.5) * step;
                    let mut acc = 0.0;
                    for ix in 0..counts[0] {
                        let x = lo[0] + (ix as f64 + 0.5) * step;
                        acc += f(&Vector(vec![x, y]));
                    }
                    Ok::<f64, Error>(acc)
                })
                .expect("row sums are infallible");
                rows.iter().sum::<f64>() * step * step
            }
            _ => {
                let planes: Vec<f64> = parallel::map_replications(counts[2], |iz| {
                    let z = lo[2] + (iz as f64 + 0.5) * step;
                    let mut acc = 0.0;
                    for iy in 0..counts[1] {
                        let y = lo[1] + (iy as f64 + 0.5) * step;
                        for ix in 0..counts[0] {
                            let x = lo[0] + (ix as f64 + 0.5) * step;
                            acc += f(&Vector(vec![x, y, z]));
                        }
                    }
                    Ok::<f64, Error>(acc)
                })
                .expect("plane sums are infallible");
                planes.iter().sum::<f64>() * step * step * step
            }
        }
    };

    let mut resolution = grid.base_resolution.max(16);
    let mut value = eval(resolution) - v_body;
    let mut diff = f64::INFINITY;
    for _ in 0..grid.max_refinements {
        let fine = eval(resolution * 2) - v_body;
        diff = (fine - value).abs();
        value = fine;
        resolution *= 2;
        if diff <= grid.tol_rel * value.abs() + grid.tol_abs {
            break;
        }
    }

    // beyond the truncated body the integrand is at most exp(-nT) and decays
    // along every ray at rate n * slope_min, where slope_min lower-bounds
    // the directional growth of m
    let slope_min = min_growth_rate(dist, dim);
    let boundary_measure = match dim {
        2 => 2.0 * ((hi[0] - lo[0]) + (hi[1] - lo[1])),
        _ => {
            2.0 * ((hi[0] - lo[0]) * (hi[1] - lo[1])
                + (hi[0] - lo[0]) * (hi[2] - lo[2])
                + (hi[1] - lo[1]) * (hi[2] - lo[2]))
        }
    };
    let tail_bound = if slope_min > 0.0 {
        (-n * t_cut).exp() * boundary_measure * 2.0 / (n * slope_min)
    } else {
        f64::INFINITY
    };

    Ok(IntegralResult {
        value,
        error_estimate: diff / 3.0 + tail_bound,
        tail_bound,
        resolution,
    })
}

/// Lower bound on the directional growth rate of `m`: the minimum over a
/// direction grid of `sum_i w_i |<v,u_i>|`.
fn min_growth_rate(dist: &DirectionalDistribution, dim: usize) -> f64 {
    let dirs: Vec<Vector> = if dim == 2 {
        (0..128)
            .map(|k| {
                let a = std::f64::consts::PI * (k as f64) / 128.0;
                Vector(vec![a.cos(), a.sin()])
            })
            .collect()
    } else {
        let mut d: Vec<Vector> = dist.atoms().iter().map(|a| a.u.clone()).collect();
        for i in 0..3 {
            d.push(Vector::unit(3, i));
        }
        d
    };
    dirs.iter()
        .map(|v| {
            dist.expanded()
                .map(|(u, w)| w * u.dot(v).abs())
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
        * 0.5 // slack for directions between grid points
}

// ---------------------------------------------------------------------------
// Conditional zero cell

/// Rejection-sample zero cells conditioned on containing `K`. The accepted
/// samples follow the K-cell law exactly (the hyperplanes hitting `K` and
/// those missing it are independent).
pub fn conditional_zero_cell(
    body: &VPolytope,
    params: &ProcessParams,
    n_accept: usize,
) -> Result<Vec<KCellSample>> {
    params.validate_for(body)?;
    let facets = body.facet_halfspaces()?;
    if facets.is_empty() {
        return Err(Error::InvalidBody(
            "conditional sampling needs a full-dimensional body".into(),
        ));
    }
    let origin = Vector::zeros(body.dim());
    if !facets
        .iter()
        .all(|h| h.contains(&origin, -crate::geometry::GEOM_TOL))
    {
        return Err(Error::InvalidParameter(
            "the origin must be interior to the body".into(),
        ));
    }
    let acceptance = (-2.0 * params.intensity as f64 * params.dist.phi(body)).exp();
    if acceptance < 1e-4 {
        eprintln!(
            "conditional zero cell acceptance rate is ~{acceptance:.2e}; this will be slow"
        );
    }
    let budget = (100.0 * n_accept as f64 / acceptance).ceil() as usize;
    let mut accepted = Vec::with_capacity(n_accept);
    for draw in 0..budget {
        let mut rng = parallel::substream(params.seed, draw as u64);
        let sample = sample_zero_cell_with_rng(params, &mut rng)?;
        let contains_body = sample
            .cell
            .halfspaces
            .iter()
            .all(|h| half_contains_body(h, body));
        if contains_body {
            accepted.push(sample);
            if accepted.len() == n_accept {
                return Ok(accepted);
            }
        }
    }
    Err(Error::AcceptanceBudget {
        accepted: accepted.len(),
        target: n_accept,
        draws: budget,
    })
}

fn half_contains_body(h: &Halfspace, body: &VPolytope) -> bool {
    let (a, b) = h.le_form();
    body.support(&a) <= b + 1e-12
}
