//! Even directional distributions on the unit sphere.
//!
//! A distribution is a finite atomic probability measure, stored as one atom
//! per antipodal pair so evenness holds by construction: a stored atom
//! `(u, w)` stands for mass `w` at `u` and mass `w` at `-u`. Continuous
//! measures (the normalized spherical Lebesgue measure, facet measures of
//! polytopes) enter as quadrature or exact atomic approximations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, hull, Vector, VPolytope, GEOM_TOL, UNIT_TOL};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DistributionKind {
    ExactDiscrete,
    Quadrature { order: usize },
    FacetMeasure,
}

/// Stored atom: direction with canonical sign, weight of each of the two
/// expanded (mirrored) atoms it represents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub u: Vector,
    pub w: f64,
}

/// Even atomic probability measure on the sphere, not concentrated on a
/// great subsphere.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionalDistribution {
    atoms: Vec<Atom>,
    kind: DistributionKind,
    expanded: Vec<(Vector, f64)>,
}

/// Serialized form: `{kind, order?, atoms: [{u, w}]}`.
#[derive(Serialize, Deserialize)]
struct DistributionFile {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<usize>,
    atoms: Vec<Atom>,
}

impl Serialize for DirectionalDistribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (kind, order) = match &self.kind {
            DistributionKind::ExactDiscrete => ("exact-discrete", None),
            DistributionKind::Quadrature { order } => ("quadrature", Some(*order)),
            DistributionKind::FacetMeasure => ("facet-measure", None),
        };
        DistributionFile {
            kind: kind.to_string(),
            order,
            atoms: self.atoms.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DirectionalDistribution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = DistributionFile::deserialize(d)?;
        let kind = match (file.kind.as_str(), file.order) {
            ("exact-discrete", _) => DistributionKind::ExactDiscrete,
            ("quadrature", Some(order)) => DistributionKind::Quadrature { order },
            ("quadrature", None) => {
                return Err(serde::de::Error::custom(
                    "quadrature distributions need an `order` field",
                ))
            }
            ("facet-measure", _) => DistributionKind::FacetMeasure,
            (other, _) => {
                return Err(serde::de::Error::custom(format!(
                    "unknown distribution kind `{other}`"
                )))
            }
        };
        DirectionalDistribution::from_atoms(file.atoms, kind).map_err(serde::de::Error::custom)
    }
}

impl DirectionalDistribution {
    /// Validates invariants and rebuilds the expanded atom cache. The atom
    /// weights must already be the per-expanded-atom weights summing to 1/2.
    fn from_atoms(atoms: Vec<Atom>, kind: DistributionKind) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidParameter("no atoms".into()));
        }
        let dim = atoms[0].u.dim();
        for a in &atoms {
            if a.u.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: a.u.dim(),
                });
            }
            if !(a.w > 0.0 && a.w.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "atom weight must be positive, got {}",
                    a.w
                )));
            }
            if !a.u.is_unit() {
                return Err(Error::InvalidParameter(
                    "atom direction is not unit length".into(),
                ));
            }
        }
        let total: f64 = atoms.iter().map(|a| 2.0 * a.w).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "expanded weights sum to {total}, expected 1"
            )));
        }
        let dirs: Vec<Vector> = atoms.iter().map(|a| a.u.clone()).collect();
        if geometry::linear_rank(&dirs) < dim {
            return Err(Error::GreatSubsphere { dim });
        }
        let mut expanded = Vec::with_capacity(2 * atoms.len());
        for a in &atoms {
            expanded.push((a.u.clone(), a.w));
            expanded.push((a.u.neg(), a.w));
        }
        Ok(DirectionalDistribution {
            atoms,
            kind,
            expanded,
        })
    }

    /// Exact discrete measure from weighted directions: directions are
    /// normalized, antipodal duplicates folded together, weights symmetrized
    /// and scaled to a probability measure.
    pub fn discrete(pairs: &[(Vector, f64)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidParameter("no directions given".into()));
        }
        let total: f64 = pairs.iter().map(|(_, w)| w).sum();
        if !(total > 0.0) {
            return Err(Error::InvalidParameter("total weight must be positive".into()));
        }
        let mut atoms: Vec<Atom> = Vec::new();
        for (dir, w) in pairs {
            if !(*w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "direction weight must be positive, got {w}"
                )));
            }
            let u = hull::canonical_direction(&dir.normalized()?);
            // each input splits its mass evenly over the antipodal pair
            let mass = w / (2.0 * total);
            match atoms
                .iter_mut()
                .find(|a| a.u.distance(&u) <= 10.0 * UNIT_TOL)
            {
                Some(a) => a.w += mass,
                None => atoms.push(Atom { u, w: mass }),
            }
        }
        Self::from_atoms(atoms, DistributionKind::ExactDiscrete)
    }

    /// Quadrature approximation of the normalized spherical Lebesgue
    /// measure. In the plane: `order` equally spaced directions on the
    /// half-circle with equal weights. In space: Gauss–Legendre nodes in the
    /// polar cosine times a uniform azimuth grid on the upper hemisphere.
    pub fn sigma(dim: usize, order: usize) -> Result<Self> {
        if order < 2 * dim {
            return Err(Error::InvalidParameter(format!(
                "quadrature order {order} too small, need at least {}",
                2 * dim
            )));
        }
        match dim {
            2 => {
                let atoms = (0..order)
                    .map(|k| {
                        let theta = std::f64::consts::PI * (k as f64) / (order as f64);
                        Atom {
                            u: hull::canonical_direction(&Vector(vec![theta.cos(), theta.sin()])),
                            w: 1.0 / (2.0 * order as f64),
                        }
                    })
                    .collect();
                Self::from_atoms(atoms, DistributionKind::Quadrature { order })
            }
            3 => {
                let n_az = ((2.0 * order as f64).sqrt().round() as usize).max(4);
                let n_z = (order + n_az - 1) / n_az;
                let (nodes, weights) = gauss_legendre(n_z);
                let mut atoms = Vec::with_capacity(n_z * n_az);
                for (z01, a) in nodes.iter().zip(&weights) {
                    // map [-1,1] Gauss nodes onto z in (0,1)
                    let z = 0.5 * (z01 + 1.0);
                    let rho = (1.0 - z * z).sqrt();
                    for j in 0..n_az {
                        let phi = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / (n_az as f64);
                        let u = Vector(vec![rho * phi.cos(), rho * phi.sin(), z]);
                        atoms.push(Atom {
                            u: hull::canonical_direction(&u.normalized()?),
                            w: 0.5 * a / (2.0 * n_az as f64),
                        });
                    }
                }
                Self::from_atoms(atoms, DistributionKind::Quadrature { order })
            }
            d => Err(Error::InvalidParameter(format!(
                "sigma quadrature unsupported in dimension {d}"
            ))),
        }
    }

    /// Surface area measure of a centrally symmetric polytope, normalized to
    /// a probability measure: atoms are the outer facet normals, weights
    /// proportional to facet areas.
    pub fn facet_measure(body: &VPolytope) -> Result<Self> {
        if !body.is_full_dimensional() {
            return Err(Error::InvalidBody(
                "facet measure needs a full-dimensional body".into(),
            ));
        }
        let c = body.centroid();
        let scale = 1.0 + body.max_vertex_norm();
        for v in body.vertices() {
            let mirrored = c.scaled(2.0).sub(v);
            if !body
                .vertices()
                .iter()
                .any(|w| w.distance(&mirrored) <= GEOM_TOL * scale)
            {
                return Err(Error::InvalidBody(
                    "facet measure needs a centrally symmetric body".into(),
                ));
            }
        }
        // (normal, surface mass) per facet
        let weighted: Vec<(Vector, f64)> = match body.dim() {
            2 => {
                let hull_pts = hull::convex_hull_2d(body.vertices());
                let n = hull_pts.len();
                (0..n)
                    .map(|i| {
                        let p = &hull_pts[i];
                        let q = &hull_pts[(i + 1) % n];
                        let normal = Vector(vec![q[1] - p[1], p[0] - q[0]]);
                        (normal, p.distance(q))
                    })
                    .collect()
            }
            3 => hull::hull_3d(body.vertices())?
                .facets()
                .into_iter()
                .map(|(n, _, area)| (Vector(n.to_vec()), area))
                .collect(),
            d => {
                return Err(Error::InvalidParameter(format!(
                    "facet measure unsupported in dimension {d}"
                )))
            }
        };
        let total: f64 = weighted.iter().map(|(_, a)| a).sum();
        let mut atoms: Vec<Atom> = Vec::new();
        for (normal, area) in weighted {
            let u = hull::canonical_direction(&normal.normalized()?);
            // antipodal facets fold into one bucket carrying both expanded
            // weights, so halve the accumulated mass
            let mass = area / total / 2.0;
            match atoms.iter_mut().find(|a| a.u.distance(&u) <= 1e-9) {
                Some(a) => a.w += mass,
                None => atoms.push(Atom { u, w: mass }),
            }
        }
        Self::from_atoms(atoms, DistributionKind::FacetMeasure)
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].u.dim()
    }

    /// Stored atoms (one per antipodal pair).
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn kind(&self) -> &DistributionKind {
        &self.kind
    }

    /// All expanded atoms `(u, w)` and `(-u, w)`; weights sum to 1.
    pub fn expanded(&self) -> impl Iterator<Item = (&Vector, f64)> {
        self.expanded.iter().map(|(u, w)| (u, *w))
    }

    pub fn num_expanded(&self) -> usize {
        self.expanded.len()
    }

    /// Whether `u` is (up to sign and tolerance) one of the atoms.
    pub fn is_atom_direction(&self, u: &Vector) -> bool {
        match u.normalized() {
            Ok(un) => {
                let c = hull::canonical_direction(&un);
                self.atoms.iter().any(|a| a.u.distance(&c) <= 1e-9)
            }
            Err(_) => false,
        }
    }

    /// `Phi(K) = sum_i w_i h(K, u_i)` over expanded atoms. Minkowski linear
    /// and monotone under inclusion; for the spherical measure in the plane
    /// it approximates `perimeter / 2 pi`.
    pub fn phi(&self, body: &VPolytope) -> f64 {
        self.expanded().map(|(u, w)| w * body.support(u)).sum()
    }

    /// Sampler over stored-atom indices with probability proportional to
    /// `w_i * tilt_i`.
    pub fn tilted_sampler(&self, tilt: &[f64]) -> Result<TiltedSampler> {
        if tilt.len() != self.atoms.len() {
            return Err(Error::InvalidParameter(
                "tilt length does not match atom count".into(),
            ));
        }
        let mut cum = Vec::with_capacity(tilt.len());
        let mut acc = 0.0;
        for (a, &t) in self.atoms.iter().zip(tilt) {
            if !(t >= 0.0) {
                return Err(Error::InvalidParameter("tilt weights must be nonnegative".into()));
            }
            acc += a.w * t;
            cum.push(acc);
        }
        if !(acc > 0.0) {
            return Err(Error::InvalidParameter("all tilt weights are zero".into()));
        }
        Ok(TiltedSampler { cum })
    }
}

/// One draw from the tilted atom distribution (see
/// [`DirectionalDistribution::tilted_sampler`] for repeated draws).
pub fn sample_tilted_direction<R: rand::Rng>(
    dist: &DirectionalDistribution,
    tilt: &[f64],
    rng: &mut R,
) -> Result<usize> {
    Ok(dist.tilted_sampler(tilt)?.sample(rng))
}

/// Cumulative-weight sampler over stored-atom indices.
#[derive(Clone, Debug)]
pub struct TiltedSampler {
    cum: Vec<f64>,
}

impl TiltedSampler {
    pub fn sample<R: rand::Rng>(&self, rng: &mut R) -> usize {
        let total = *self.cum.last().unwrap();
        let t: f64 = rng.gen_range(0.0..total);
        match self
            .cum
            .binary_search_by(|c| c.partial_cmp(&t).unwrap_or(std::cmp::Ordering::Equal))
        {
            Ok(i) => (i + 1).min(self.cum.len() - 1),
            Err(i) => i.min(self.cum.len() - 1),
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre recurrence. Good to machine precision for the small orders used
/// here.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-like initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Legendre polynomial `P_n(x)` and derivative by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = pk;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}
