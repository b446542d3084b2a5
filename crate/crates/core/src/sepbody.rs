//! The separating-hyperplane measure `m(K,x)` and the bodies it defines.
//!
//! For an even atomic measure the quantities here are exact piecewise-linear
//! convex expressions:
//!
//! - `m(K,x) = 2 sum_i w_i (<x,u_i> - h(K,u_i))_+` over expanded atoms, the
//!   measure of hyperplanes with atom normals weakly separating `x` from
//!   `K`;
//! - `psi(H) = min { m(K,x) : x in H }`, a small linear program;
//! - the separation body `{x : m(K,x) <= delta}`, whose support function is
//!   computed two independent ways: a cutting-plane linear program over the
//!   membership constraint (valid in every direction), and bisection on
//!   `tau -> psi(H(u,tau))`, which characterizes the support in atom
//!   directions.

use crate::directional::{DirectionalDistribution, DistributionKind};
use crate::error::{Error, Result};
use crate::geometry::hull::convex_hull_2d;
use crate::geometry::lp::{self, Cmp, LinearProgram, LpOutcome, VarBound};
use crate::geometry::{HPolytope, Halfspace, Hyperplane, Orientation, VPolytope, Vector};

/// Absolute tolerance on `m` for membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-12;
/// Target accuracy of `m` at boundary points found by ray bisection.
pub const BOUNDARY_M_TOL: f64 = 1e-10;
/// Offset tolerance of the bisection route for the support function.
pub const BISECT_TAU_TOL: f64 = 1e-9;

/// A body, an even directional distribution, and a separation parameter;
/// caches the atom support values so that `m` evaluations are one pass over
/// the expanded atoms.
#[derive(Clone, Debug)]
pub struct SeparationQuery {
    body: VPolytope,
    dist: DirectionalDistribution,
    delta: f64,
    /// `h(K, u_i)` per expanded atom.
    supports: Vec<f64>,
}

impl SeparationQuery {
    pub fn new(body: VPolytope, dist: DirectionalDistribution, delta: f64) -> Result<Self> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "separation parameter must be nonnegative, got {delta}"
            )));
        }
        if body.dim() != dist.dim() {
            return Err(Error::DimensionMismatch {
                expected: body.dim(),
                got: dist.dim(),
            });
        }
        if !body.is_full_dimensional() {
            return Err(Error::InvalidBody(
                "separation queries need a full-dimensional body".into(),
            ));
        }
        let supports = dist.expanded().map(|(u, _)| body.support(u)).collect();
        Ok(SeparationQuery {
            body,
            dist,
            delta,
            supports,
        })
    }

    pub fn body(&self) -> &VPolytope {
        &self.body
    }

    pub fn distribution(&self) -> &DirectionalDistribution {
        &self.dist
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn dim(&self) -> usize {
        self.body.dim()
    }

    /// Separating-hyperplane measure at `x`.
    pub fn m(&self, x: &Vector) -> f64 {
        let mut acc = 0.0;
        for ((u, w), h) in self.dist.expanded().zip(&self.supports) {
            let excess = u.dot(x) - h;
            if excess > 0.0 {
                acc += w * excess;
            }
        }
        2.0 * acc
    }

    /// A subgradient of `m` at `x` (the gradient wherever `m` is smooth).
    pub fn m_subgradient(&self, x: &Vector) -> Vector {
        let mut g = vec![0.0; self.dim()];
        for ((u, w), h) in self.dist.expanded().zip(&self.supports) {
            if u.dot(x) - h > 0.0 {
                for (gi, ui) in g.iter_mut().zip(u.as_slice()) {
                    *gi += 2.0 * w * ui;
                }
            }
        }
        Vector(g)
    }

    /// `m(K,x) <= delta` up to [`MEMBERSHIP_TOL`].
    pub fn membership(&self, x: &Vector) -> bool {
        self.m(x) <= self.delta + MEMBERSHIP_TOL
    }

    pub fn with_delta(&self, delta: f64) -> Result<SeparationQuery> {
        let mut q = self.clone();
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "separation parameter must be nonnegative, got {delta}"
            )));
        }
        q.delta = delta;
        Ok(q)
    }
}

/// `m(K,x) = 2 [Phi(K^x) - Phi(K)]` for a one-off evaluation.
pub fn m_value(body: &VPolytope, dist: &DirectionalDistribution, x: &Vector) -> f64 {
    let mut acc = 0.0;
    for (u, w) in dist.expanded() {
        let excess = u.dot(x) - body.support(u);
        if excess > 0.0 {
            acc += w * excess;
        }
    }
    2.0 * acc
}

/// Minimum of `m` over a hyperplane, with a point attaining it.
#[derive(Clone, Debug)]
pub struct PsiResult {
    pub value: f64,
    pub minimizer: Vector,
}

/// `psi(H) = min { m(K,x) : x in H }` by linear programming: minimize
/// `2 sum w_i s_i` with `s_i >= <x,u_i> - h_i`, `s_i >= 0` and `x` on `H`.
pub fn psi_value(
    hyperplane: &Hyperplane,
    body: &VPolytope,
    dist: &DirectionalDistribution,
) -> Result<PsiResult> {
    let d = body.dim();
    if hyperplane.normal().dim() != d || dist.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: hyperplane.normal().dim(),
        });
    }
    let atoms: Vec<(&Vector, f64)> = dist.expanded().collect();
    let a = atoms.len();
    let nvars = d + a;
    let mut rows = Vec::with_capacity(a + 1);
    for (i, (u, _)) in atoms.iter().enumerate() {
        let mut row = vec![0.0; nvars];
        row[..d].copy_from_slice(u.as_slice());
        row[d + i] = -1.0;
        rows.push((row, Cmp::Le, body.support(u)));
    }
    let mut eq = vec![0.0; nvars];
    eq[..d].copy_from_slice(hyperplane.normal().as_slice());
    rows.push((eq, Cmp::Eq, hyperplane.offset()));

    let mut objective = vec![0.0; nvars];
    for (i, (_, w)) in atoms.iter().enumerate() {
        objective[d + i] = -2.0 * w;
    }
    let mut bounds = vec![VarBound::Free; d];
    bounds.extend(std::iter::repeat(VarBound::NonNeg).take(a));

    match lp::solve(&LinearProgram {
        objective,
        rows,
        bounds,
    })? {
        LpOutcome::Optimal(s) => Ok(PsiResult {
            value: -s.value,
            minimizer: Vector(s.x[..d].to_vec()),
        }),
        LpOutcome::Infeasible => Err(Error::SolverFailure(
            "psi program reported infeasible".into(),
        )),
        LpOutcome::Unbounded => Err(Error::SolverFailure(
            "psi program reported unbounded".into(),
        )),
    }
}

/// `K[phi,0] = K_phi`: intersection of the supporting halfspaces with atom
/// normals. Bounded because the atoms span the space and come in antipodal
/// pairs.
pub fn k_phi(body: &VPolytope, dist: &DirectionalDistribution) -> Result<HPolytope> {
    if body.dim() != dist.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: dist.dim(),
        });
    }
    let halfspaces = dist
        .expanded()
        .map(|(u, _)| Halfspace {
            u: u.clone(),
            tau: body.support(u),
            orientation: Orientation::Le,
        })
        .collect();
    HPolytope::new(halfspaces, true)
}

/// Support function of the separation body, primary route: the linear
/// program `max <x,u>` subject to `m(K,x) <= delta`, solved by cutting
/// planes on the membership constraint (each cut is one linear piece of
/// `m`). Valid for every direction `u`. For `delta = 0` this is the support
/// of `K_phi`.
pub fn support_sepbody(q: &SeparationQuery, u: &Vector) -> Result<f64> {
    if u.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: q.dim(),
            got: u.dim(),
        });
    }
    if u.norm() < 1e-300 {
        return Err(Error::InvalidParameter("zero direction".into()));
    }
    if q.delta == 0.0 {
        return lp::lp_support_point(&k_phi(&q.body, &q.dist)?, u).map(|s| s.value);
    }
    let d = q.dim();
    let origin = q.body.centroid();
    debug_assert!(q.m(&origin) <= MEMBERSHIP_TOL);
    let tol_m = 1e-12 * (1.0 + q.delta);
    // cuts in origin-shifted coordinates: <g, x'> <= rhs, rhs >= 0
    let mut cuts: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut rbox = q.body.max_vertex_norm() + origin.norm() + q.delta + 10.0;
    for _growth in 0..60 {
        let mut grow_box = false;
        for _iter in 0..500 {
            let mut rows: Vec<(Vec<f64>, Cmp, f64)> = cuts
                .iter()
                .map(|(g, rhs)| (g.clone(), Cmp::Le, *rhs))
                .collect();
            for i in 0..d {
                let mut row = vec![0.0; d];
                row[i] = 1.0;
                rows.push((row.clone(), Cmp::Le, rbox));
                row[i] = -1.0;
                rows.push((row, Cmp::Le, rbox));
            }
            let sol = match lp::solve(&LinearProgram {
                objective: u.as_slice().to_vec(),
                rows,
                bounds: vec![VarBound::Free; d],
            })? {
                LpOutcome::Optimal(s) => s,
                _ => {
                    return Err(Error::SolverFailure(
                        "support master program failed".into(),
                    ))
                }
            };
            let shifted = Vector(sol.x.clone());
            let x = shifted.add(&origin);
            let m = q.m(&x);
            let on_box = shifted
                .as_slice()
                .iter()
                .any(|c| c.abs() >= rbox * (1.0 - 1e-9));
            if m <= q.delta + tol_m {
                if on_box {
                    grow_box = true;
                    break;
                }
                return Ok(x.dot(u));
            }
            let g = q.m_subgradient(&x);
            let rhs = q.delta - m + g.dot(&shifted);
            cuts.push((g.0, rhs));
        }
        if grow_box {
            rbox *= 2.0;
            continue;
        }
        return Err(Error::SolverFailure(
            "cutting-plane iteration limit exceeded".into(),
        ));
    }
    Err(Error::SolverFailure(
        "support box growth limit exceeded".into(),
    ))
}

/// Support function of the separation body, secondary route: bisection on
/// `tau -> psi(H(u,tau))`, which is nondecreasing, strictly so beyond the
/// body in atom directions. Used as a cross-check of [`support_sepbody`].
pub fn support_sepbody_bisect(q: &SeparationQuery, u: &Vector) -> Result<f64> {
    let un = u.normalized()?;
    if q.delta == 0.0 {
        return lp::lp_support_point(&k_phi(&q.body, &q.dist)?, &un).map(|s| s.value);
    }
    let psi_at = |tau: f64| -> Result<f64> {
        Ok(psi_value(&Hyperplane::new(&un, tau)?, &q.body, &q.dist)?.value)
    };
    let h0 = q.body.support(&un);
    let step0 = q.body.diameter() + 1.0;
    let mut lo = h0;
    let mut hi = h0 + step0;
    let mut grow = 0;
    while psi_at(hi)? <= q.delta {
        lo = hi;
        hi = h0 + (hi - h0) * 2.0;
        grow += 1;
        if grow > 60 {
            return Err(Error::BracketFailure(format!(
                "psi stayed below delta out to tau = {hi}"
            )));
        }
    }
    while hi - lo > BISECT_TAU_TOL {
        let mid = 0.5 * (lo + hi);
        if psi_at(mid)? <= q.delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Boundary point of the separation body along the ray `o_in + t v`:
/// the unique `t > 0` with `m = delta`, by exponential bracketing and
/// bisection to [`BOUNDARY_M_TOL`].
pub fn boundary_ray(q: &SeparationQuery, o_in: &Vector, v: &Vector) -> Result<Vector> {
    if q.delta <= 0.0 {
        return Err(Error::InvalidParameter(
            "boundary rays need delta > 0".into(),
        ));
    }
    if q.m(o_in) > MEMBERSHIP_TOL {
        return Err(Error::InvalidParameter(
            "ray origin must satisfy m = 0".into(),
        ));
    }
    let dir = v.normalized()?;
    let at = |t: f64| o_in.add(&dir.scaled(t));
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut grow = 0;
    while q.m(&at(hi)) <= q.delta {
        lo = hi;
        hi *= 2.0;
        grow += 1;
        // the atoms span the space, so m grows without bound along every ray
        if grow > 200 {
            return Err(Error::BracketFailure("m never exceeded delta".into()));
        }
    }
    // land on the inside of the tolerance band, so the returned point is a
    // member of the body
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        let m = q.m(&at(mid));
        if m > q.delta {
            hi = mid;
        } else if q.delta - m <= BOUNDARY_M_TOL {
            return Ok(at(mid));
        } else {
            lo = mid;
        }
    }
    Ok(at(lo))
}

/// The two vertices of a 2D body touched by the support lines through an
/// exterior point, ordered so that the boundary path from the first to the
/// second, counterclockwise, is the side facing the point.
pub fn tangent_vertices(body: &VPolytope, x: &Vector) -> Result<(Vector, Vector)> {
    let (hull, ip, iq) = tangent_indices(body, x)?;
    Ok((hull[ip].clone(), hull[iq].clone()))
}

fn tangent_indices(body: &VPolytope, x: &Vector) -> Result<(Vec<Vector>, usize, usize)> {
    if body.dim() != 2 {
        return Err(Error::InvalidParameter(
            "tangent vertices are defined in dimension 2 only".into(),
        ));
    }
    if body.contains(x, 0.0)? {
        return Err(Error::InvalidParameter(
            "point lies inside the body".into(),
        ));
    }
    let hull = convex_hull_2d(body.vertices());
    if hull.len() < 3 {
        return Err(Error::InvalidBody("degenerate 2D body".into()));
    }
    let c = body.centroid();
    let theta0 = (c[1] - x[1]).atan2(c[0] - x[0]);
    let wrap = |a: f64| {
        let mut t = a;
        while t <= -std::f64::consts::PI {
            t += 2.0 * std::f64::consts::PI;
        }
        while t > std::f64::consts::PI {
            t -= 2.0 * std::f64::consts::PI;
        }
        t
    };
    // all vertex directions from an exterior point span less than pi, so
    // relative angles never straddle the branch cut
    let rel: Vec<f64> = hull
        .iter()
        .map(|v| wrap((v[1] - x[1]).atan2(v[0] - x[0]) - theta0))
        .collect();
    let better = |i: usize, j: usize, want_max: bool| -> bool {
        let (a, b) = (rel[i], rel[j]);
        if (a - b).abs() <= 1e-12 {
            // collinear tie: take the vertex farther from x
            hull[i].distance(x) > hull[j].distance(x)
        } else if want_max {
            a > b
        } else {
            a < b
        }
    };
    let mut ip = 0;
    let mut iq = 0;
    for i in 1..hull.len() {
        if better(i, ip, true) {
            ip = i;
        }
        if better(i, iq, false) {
            iq = i;
        }
    }
    Ok((hull, ip, iq))
}

/// Focal description of one elliptic boundary arc of the separation body
/// of a 2D polytope under the spherical measure: points `y` in the region
/// of `x` with `|y-p| + |y-q| = axis_sum` satisfy `m = delta` up to
/// quadrature error.
#[derive(Clone, Debug)]
pub struct EllipseParams {
    pub focus_p: Vector,
    pub focus_q: Vector,
    pub axis_sum: f64,
}

pub fn ellipse_params(
    body: &VPolytope,
    region_witness: &Vector,
    delta: f64,
    dist: &DirectionalDistribution,
) -> Result<EllipseParams> {
    if !matches!(dist.kind(), DistributionKind::Quadrature { .. }) {
        return Err(Error::InvalidParameter(
            "elliptic arcs require a spherical quadrature measure".into(),
        ));
    }
    let (hull, ip, iq) = tangent_indices(body, region_witness)?;
    // replaced boundary path: counterclockwise walk from p to q
    let mut arc = 0.0;
    let mut i = ip;
    while i != iq {
        let j = (i + 1) % hull.len();
        arc += hull[i].distance(&hull[j]);
        i = j;
    }
    Ok(EllipseParams {
        focus_p: hull[ip].clone(),
        focus_q: hull[iq].clone(),
        axis_sum: std::f64::consts::PI * delta + arc,
    })
}
