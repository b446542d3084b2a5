//! Finite-dimensional convex geometry on vertex polytopes.
//!
//! Everything downstream reduces to support-function evaluations on a finite
//! vertex set, so the types here are deliberately small: a coordinate vector,
//! hyperplanes/halfspaces with unit normals, a vertex polytope, and a
//! halfspace polytope probed through a linear program.
//!
//! Conventions:
//! - halfspaces are stored with unit normals; `Le` means `<x,u> <= tau`,
//!   `Ge` means `<x,u> >= tau`;
//! - hyperplanes identify `H(u,tau)` with `H(-u,-tau)` by flipping the sign
//!   so that the first nonzero coordinate of the normal is positive;
//! - unit-norm checks use `UNIT_TOL`, geometric predicates use `GEOM_TOL`.

pub mod clip;
pub mod hull;
pub mod lp;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for unit-norm checks.
pub const UNIT_TOL: f64 = 1e-12;
/// Tolerance for geometric predicates (vertex on hyperplane, containment).
pub const GEOM_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Vector

/// Euclidean coordinate vector. Dimensions 2 and 3 get full polytope
/// functionality; support-function arithmetic works in any dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(pub Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("empty coordinate vector".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "non-finite coordinate in vector".into(),
            ));
        }
        Ok(Vector(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim])
    }

    /// Standard basis vector `e_i`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut c = vec![0.0; dim];
        c[i] = 1.0;
        Vector(c)
    }

    pub fn from_slice(coords: &[f64]) -> Self {
        Vector(coords.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scaled(&self, t: f64) -> Vector {
        Vector(self.0.iter().map(|c| c * t).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Vector {
        Vector(self.0.iter().map(|c| -c).collect())
    }

    /// Unit vector in the same direction, or an error for (near-)zero input.
    pub fn normalized(&self) -> Result<Vector> {
        let n = self.norm();
        if !n.is_finite() || n < 1e-300 {
            return Err(Error::InvalidParameter(
                "cannot normalize a zero vector".into(),
            ));
        }
        Ok(self.scaled(1.0 / n))
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - 1.0).abs() <= UNIT_TOL
    }

    pub fn distance(&self, other: &Vector) -> f64 {
        self.sub(other).norm()
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Sign convention shared by hyperplanes and stored measure atoms: the first
/// coordinate larger than `UNIT_TOL` in absolute value must be positive.
pub(crate) fn canonical_sign(u: &[f64]) -> f64 {
    for &c in u {
        if c.abs() > UNIT_TOL {
            return if c > 0.0 { 1.0 } else { -1.0 };
        }
    }
    1.0
}

// ---------------------------------------------------------------------------
// Hyperplane / Halfspace

/// Hyperplane `{x : <x,u> = tau}` with unit normal, stored in canonical form:
/// `H(u,tau)` and `H(-u,-tau)` are the same object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    u: Vector,
    tau: f64,
}

impl Hyperplane {
    pub fn new(normal: &Vector, tau: f64) -> Result<Self> {
        let norm = normal.norm();
        let u = normal.normalized()?;
        let s = canonical_sign(u.as_slice());
        Ok(Hyperplane {
            u: u.scaled(s),
            tau: tau / norm * s,
        })
    }

    pub fn normal(&self) -> &Vector {
        &self.u
    }

    pub fn offset(&self) -> f64 {
        self.tau
    }

    /// Signed value `<x,u> - tau`; zero on the hyperplane.
    pub fn eval(&self, x: &Vector) -> f64 {
        self.u.dot(x) - self.tau
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Le,
    Ge,
}

/// Closed halfspace `<x,u> <= tau` (`Le`) or `<x,u> >= tau` (`Ge`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub u: Vector,
    pub tau: f64,
    pub orientation: Orientation,
}

impl Halfspace {
    /// Normalizes the normal to unit length (rescaling the offset).
    pub fn new(normal: &Vector, tau: f64, orientation: Orientation) -> Result<Self> {
        let n = normal.norm();
        if !n.is_finite() || n < 1e-300 {
            return Err(Error::InvalidParameter("halfspace with zero normal".into()));
        }
        Ok(Halfspace {
            u: normal.scaled(1.0 / n),
            tau: tau / n,
            orientation,
        })
    }

    pub fn le(normal: &Vector, tau: f64) -> Result<Self> {
        Self::new(normal, tau, Orientation::Le)
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        match self.orientation {
            Orientation::Le => self.u.dot(x) <= self.tau + tol,
            Orientation::Ge => self.u.dot(x) >= self.tau - tol,
        }
    }

    /// The halfspace as a row `<x,a> <= b`.
    pub fn le_form(&self) -> (Vector, f64) {
        match self.orientation {
            Orientation::Le => (self.u.clone(), self.tau),
            Orientation::Ge => (self.u.neg(), -self.tau),
        }
    }

    /// Boundary hyperplane.
    pub fn boundary(&self) -> Result<Hyperplane> {
        Hyperplane::new(&self.u, self.tau)
    }
}

// ---------------------------------------------------------------------------
// VPolytope

/// Convex body given by a finite vertex set (the convex hull is implicit).
///
/// A single vertex is allowed; it is the degenerate body used for the zero
/// cell. Bodies that drive experiments should be constructed with
/// [`VPolytope::full_dimensional`], which rejects lower-dimensional input.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VPolytope {
    vertices: Vec<Vector>,
    #[serde(skip)]
    dim: usize,
}

impl VPolytope {
    pub fn new(vertices: Vec<Vector>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidBody("empty vertex list".into()));
        }
        let dim = vertices[0].dim();
        if dim < 2 {
            return Err(Error::InvalidBody("ambient dimension must be >= 2".into()));
        }
        for v in &vertices {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.dim(),
                });
            }
        }
        Ok(VPolytope { vertices, dim })
    }

    /// Constructor for full-dimensional bodies (affine hull equals `R^d`).
    pub fn full_dimensional(vertices: Vec<Vector>) -> Result<Self> {
        let p = Self::new(vertices)?;
        if !p.is_full_dimensional() {
            return Err(Error::InvalidBody(
                "body has empty interior (affine hull is a proper subspace)".into(),
            ));
        }
        Ok(p)
    }

    /// Degenerate single-point body.
    pub fn point(x: Vector) -> Result<Self> {
        Self::new(vec![x])
    }

    /// Axis-aligned box `[-r, r]^d` (`d` in {2,3}).
    pub fn symmetric_box(dim: usize, r: f64) -> Result<Self> {
        let mut vertices = Vec::new();
        for mask in 0..(1usize << dim) {
            let coords = (0..dim)
                .map(|i| if mask >> i & 1 == 1 { r } else { -r })
                .collect();
            vertices.push(Vector(coords));
        }
        Self::full_dimensional(vertices)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    /// Rank of the difference matrix equals the ambient dimension.
    pub fn is_full_dimensional(&self) -> bool {
        affine_rank(&self.vertices) == self.dim
    }

    /// Support function `h(K,u) = max_v <v,u>`; positively homogeneous, `u`
    /// need not be a unit vector.
    pub fn support(&self, u: &Vector) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// A vertex attaining the support in direction `u`.
    pub fn support_point(&self, u: &Vector) -> &Vector {
        let mut best = &self.vertices[0];
        let mut hv = best.dot(u);
        for v in &self.vertices[1..] {
            let t = v.dot(u);
            if t > hv {
                hv = t;
                best = v;
            }
        }
        best
    }

    /// `h(conv(K ∪ {x}), u)` without materializing the hull.
    pub fn support_with_point(&self, x: &Vector, u: &Vector) -> f64 {
        self.support(u).max(x.dot(u))
    }

    /// Width in direction `u`: `h(K,u) + h(K,-u)`.
    pub fn width(&self, u: &Vector) -> f64 {
        self.support(u) + self.support(&u.neg())
    }

    /// Average of the vertices (lies in the body).
    pub fn centroid(&self) -> Vector {
        let mut c = vec![0.0; self.dim];
        for v in &self.vertices {
            for (ci, vi) in c.iter_mut().zip(v.as_slice()) {
                *ci += vi;
            }
        }
        let n = self.vertices.len() as f64;
        Vector(c.into_iter().map(|x| x / n).collect())
    }

    pub fn max_vertex_norm(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn translated(&self, t: &Vector) -> VPolytope {
        VPolytope {
            vertices: self.vertices.iter().map(|v| v.add(t)).collect(),
            dim: self.dim,
        }
    }

    /// Diameter of the vertex set.
    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for (i, v) in self.vertices.iter().enumerate() {
            for w in &self.vertices[i + 1..] {
                d = d.max(v.distance(w));
            }
        }
        d
    }

    /// Hull membership with tolerance `tol` (positive `tol` grows the body).
    /// Implemented through the facet halfspaces in dimensions 2 and 3.
    pub fn contains(&self, x: &Vector, tol: f64) -> Result<bool> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        let facets = self.facet_halfspaces()?;
        if facets.is_empty() {
            // degenerate body: fall back to vertex distance
            return Ok(self.vertices.iter().any(|v| v.distance(x) <= tol.max(0.0)));
        }
        Ok(facets.iter().all(|h| h.contains(x, tol)))
    }

    /// Outer facet halfspaces of the hull (d in {2,3}); empty for degenerate
    /// bodies.
    pub fn facet_halfspaces(&self) -> Result<Vec<Halfspace>> {
        match self.dim {
            2 => Ok(hull::facets_2d(&self.vertices)),
            3 => hull::facets_3d(&self.vertices),
            d => Err(Error::InvalidParameter(format!(
                "facet enumeration unsupported in dimension {d}"
            ))),
        }
    }

    /// Lebesgue measure of the hull; 0 for degenerate bodies (d in {2,3}).
    pub fn volume(&self) -> Result<f64> {
        match self.dim {
            2 => Ok(hull::area_2d(&self.vertices)),
            3 => Ok(hull::volume_3d(&self.vertices)),
            d => Err(Error::InvalidParameter(format!(
                "volume unsupported in dimension {d}"
            ))),
        }
    }

    /// Perimeter of the hull (2D only).
    pub fn perimeter(&self) -> Result<f64> {
        if self.dim != 2 {
            return Err(Error::InvalidParameter(
                "perimeter is defined in dimension 2 only".into(),
            ));
        }
        Ok(hull::perimeter_2d(&self.vertices))
    }
}

/// Dimension of the affine hull of a point set.
pub fn affine_rank(points: &[Vector]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let rows: Vec<Vector> = points[1..].iter().map(|p| p.sub(&points[0])).collect();
    linear_rank(&rows)
}

/// Rank of a set of vectors, by Gaussian elimination with partial pivoting.
pub fn linear_rank(rows: &[Vector]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let dim = rows[0].dim();
    let mut m: Vec<Vec<f64>> = rows.iter().map(|r| r.0.clone()).collect();
    let scale = m
        .iter()
        .flat_map(|r| r.iter().map(|x| x.abs()))
        .fold(0.0f64, f64::max)
        .max(1.0);
    let tol = GEOM_TOL * scale;
    let mut rank = 0;
    for col in 0..dim {
        let Some(pivot) = (rank..m.len()).max_by(|&a, &b| {
            m[a][col]
                .abs()
                .partial_cmp(&m[b][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        }) else {
            break;
        };
        if m[pivot][col].abs() <= tol {
            continue;
        }
        m.swap(rank, pivot);
        let p = m[rank][col];
        for r in rank + 1..m.len() {
            let f = m[r][col] / p;
            for c in col..dim {
                m[r][c] -= f * m[rank][c];
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

// ---------------------------------------------------------------------------
// HPolytope

/// Polytope as an intersection of halfspaces. `bounded` records whether the
/// construction guarantees a finite support value in every direction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HPolytope {
    pub halfspaces: Vec<Halfspace>,
    pub bounded: bool,
    pub dim: usize,
}

impl HPolytope {
    pub fn new(halfspaces: Vec<Halfspace>, bounded: bool) -> Result<Self> {
        let dim = halfspaces
            .first()
            .map(|h| h.u.dim())
            .ok_or_else(|| Error::InvalidParameter("empty halfspace list".into()))?;
        for h in &halfspaces {
            if h.u.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: h.u.dim(),
                });
            }
        }
        Ok(HPolytope {
            halfspaces,
            bounded,
            dim,
        })
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x, tol))
    }
}

// ---------------------------------------------------------------------------
// Free-function forms of the core operations

/// `h(K,u)`.
pub fn support(body: &VPolytope, u: &Vector) -> f64 {
    body.support(u)
}

/// `h(conv(K ∪ {x}), u)`.
pub fn support_with_point(body: &VPolytope, x: &Vector, u: &Vector) -> f64 {
    body.support_with_point(x, u)
}

/// Whether `hp` separates `x` from `body` (weakly, or strictly when
/// `strict`). Weak separation allows both the body and the point to touch
/// the hyperplane.
pub fn separates(hp: &Hyperplane, body: &VPolytope, x: &Vector, strict: bool) -> bool {
    let u = hp.normal();
    let tau = hp.offset();
    let xu = x.dot(u);
    let h_up = body.support(u);
    let h_dn = body.support(&u.neg());
    if strict {
        (xu > tau && tau > h_up) || (xu < tau && tau < -h_dn)
    } else {
        (xu >= tau && tau >= h_up) || (xu <= tau && tau <= -h_dn)
    }
}

/// Mean width `2 * sum_i w_i h(P, u_i)` against a spherical quadrature.
/// In the plane this converges to `perimeter / pi` as the order grows.
pub fn mean_width(body: &VPolytope, quad: &crate::directional::DirectionalDistribution) -> f64 {
    let mut acc = 0.0;
    for (u, w) in quad.expanded() {
        acc += w * body.support(u);
    }
    2.0 * acc
}
