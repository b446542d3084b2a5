//! Convex hulls, areas, and facet enumeration in dimensions 2 and 3.
//!
//! 2D uses Andrew's monotone chain; 3D uses an incremental hull with
//! visible-face deletion. Both are sized for desk-scale inputs (a few
//! hundred points per cell).

use crate::error::{Error, Result};
use crate::geometry::{canonical_sign, Halfspace, Orientation, Vector, GEOM_TOL};

fn cross2(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// CCW hull of a 2D point set, collinear points dropped. Fewer than three
/// output points means the input is degenerate.
pub fn convex_hull_2d(points: &[Vector]) -> Vec<Vector> {
    let mut pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() < 1e-14 && (a[1] - b[1]).abs() < 1e-14);
    if pts.len() < 3 {
        return pts.into_iter().map(|p| Vector(p.to_vec())).collect();
    }
    let scale = pts
        .iter()
        .flat_map(|p| p.iter().map(|c| c.abs()))
        .fold(1.0f64, f64::max);
    let tol = 1e-12 * scale * scale;
    let mut lower: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && cross2(&lower[lower.len() - 2], &lower[lower.len() - 1], &p) <= tol
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross2(&upper[upper.len() - 2], &upper[upper.len() - 1], &p) <= tol
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower.into_iter().map(|p| Vector(p.to_vec())).collect()
}

/// Shoelace area of the hull of a 2D point set; 0 when degenerate.
pub fn area_2d(points: &[Vector]) -> f64 {
    let hull = convex_hull_2d(points);
    if hull.len() < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..hull.len() {
        let a = &hull[i];
        let b = &hull[(i + 1) % hull.len()];
        acc += a[0] * b[1] - b[0] * a[1];
    }
    0.5 * acc.abs()
}

/// Boundary length of the hull cycle of a 2D point set.
pub fn perimeter_2d(points: &[Vector]) -> f64 {
    let hull = convex_hull_2d(points);
    if hull.len() < 2 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..hull.len() {
        let a = &hull[i];
        let b = &hull[(i + 1) % hull.len()];
        acc += a.distance(b);
    }
    acc
}

/// Outer edge halfspaces of the 2D hull; empty for degenerate input.
pub fn facets_2d(points: &[Vector]) -> Vec<Halfspace> {
    let hull = convex_hull_2d(points);
    if hull.len() < 3 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(hull.len());
    for i in 0..hull.len() {
        let p = &hull[i];
        let q = &hull[(i + 1) % hull.len()];
        // CCW boundary: outward normal is the edge rotated -90 degrees
        let n = Vector(vec![q[1] - p[1], p[0] - q[0]]);
        if let Ok(u) = n.normalized() {
            let tau = u.dot(p);
            out.push(Halfspace {
                u,
                tau,
                orientation: Orientation::Le,
            });
        }
    }
    out
}

// ---------------------------------------------------------------------------
// 3D incremental hull

#[derive(Clone, Debug)]
struct Face {
    idx: [usize; 3],
    normal: [f64; 3],
    offset: f64,
}

fn sub3(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

/// Triangulated hull of a 3D point set.
pub struct Hull3 {
    pub points: Vec<[f64; 3]>,
    faces: Vec<Face>,
}

/// Incremental 3D convex hull. Degenerate (flat) input is reported as an
/// error; callers that only need a volume treat it as zero.
pub fn hull_3d(points: &[Vector]) -> Result<Hull3> {
    let pts: Vec<[f64; 3]> = points.iter().map(|p| [p[0], p[1], p[2]]).collect();
    let scale = pts
        .iter()
        .flat_map(|p| p.iter().map(|c| c.abs()))
        .fold(1.0f64, f64::max);
    let tol = GEOM_TOL * scale;

    if pts.len() < 4 {
        return Err(Error::DegenerateCell("fewer than 4 points".into()));
    }

    // initial simplex: spread-out quadruple
    let i0 = 0;
    let i1 = (0..pts.len())
        .max_by(|&a, &b| {
            norm3(sub3(&pts[a], &pts[i0]))
                .partial_cmp(&norm3(sub3(&pts[b], &pts[i0])))
                .unwrap()
        })
        .unwrap();
    if norm3(sub3(&pts[i1], &pts[i0])) <= tol {
        return Err(Error::DegenerateCell("all points coincide".into()));
    }
    let d01 = sub3(&pts[i1], &pts[i0]);
    let i2 = (0..pts.len())
        .max_by(|&a, &b| {
            norm3(cross3(d01, sub3(&pts[a], &pts[i0])))
                .partial_cmp(&norm3(cross3(d01, sub3(&pts[b], &pts[i0]))))
                .unwrap()
        })
        .unwrap();
    let n012 = cross3(d01, sub3(&pts[i2], &pts[i0]));
    if norm3(n012) <= tol * norm3(d01) {
        return Err(Error::DegenerateCell("points are collinear".into()));
    }
    let i3 = (0..pts.len())
        .max_by(|&a, &b| {
            dot3(n012, sub3(&pts[a], &pts[i0]))
                .abs()
                .partial_cmp(&dot3(n012, sub3(&pts[b], &pts[i0])).abs())
                .unwrap()
        })
        .unwrap();
    if dot3(n012, sub3(&pts[i3], &pts[i0])).abs() <= tol * norm3(n012) {
        return Err(Error::DegenerateCell("points are coplanar".into()));
    }

    let interior = [
        (pts[i0][0] + pts[i1][0] + pts[i2][0] + pts[i3][0]) / 4.0,
        (pts[i0][1] + pts[i1][1] + pts[i2][1] + pts[i3][1]) / 4.0,
        (pts[i0][2] + pts[i1][2] + pts[i2][2] + pts[i3][2]) / 4.0,
    ];
    let mk_face = |a: usize, b: usize, c: usize| -> Face {
        let mut n = cross3(sub3(&pts[b], &pts[a]), sub3(&pts[c], &pts[a]));
        let ln = norm3(n);
        n = [n[0] / ln, n[1] / ln, n[2] / ln];
        let mut idx = [a, b, c];
        let mut off = dot3(n, pts[a]);
        if dot3(n, interior) > off {
            n = [-n[0], -n[1], -n[2]];
            off = -off;
            idx.swap(1, 2);
        }
        Face {
            idx,
            normal: n,
            offset: off,
        }
    };
    let mut faces = vec![
        mk_face(i0, i1, i2),
        mk_face(i0, i1, i3),
        mk_face(i0, i2, i3),
        mk_face(i1, i2, i3),
    ];

    for (p_idx, p) in pts.iter().enumerate() {
        if p_idx == i0 || p_idx == i1 || p_idx == i2 || p_idx == i3 {
            continue;
        }
        let visible: Vec<usize> = (0..faces.len())
            .filter(|&f| dot3(faces[f].normal, *p) > faces[f].offset + tol)
            .collect();
        if visible.is_empty() {
            continue;
        }
        // horizon = directed edges of visible faces that are not shared by
        // another visible face
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for &f in &visible {
            let [a, b, c] = faces[f].idx;
            for e in [(a, b), (b, c), (c, a)] {
                if let Some(pos) = edges.iter().position(|&(x, y)| (y, x) == e) {
                    edges.swap_remove(pos);
                } else {
                    edges.push(e);
                }
            }
        }
        let mut keep: Vec<Face> = faces
            .drain(..)
            .enumerate()
            .filter(|(i, _)| !visible.contains(i))
            .map(|(_, f)| f)
            .collect();
        for (a, b) in edges {
            let mut n = cross3(sub3(&pts[b], &pts[a]), sub3(p, &pts[a]));
            let ln = norm3(n);
            if ln <= tol * tol {
                continue; // sliver; the neighbor faces cover it
            }
            n = [n[0] / ln, n[1] / ln, n[2] / ln];
            let mut off = dot3(n, pts[a]);
            let mut idx = [a, b, p_idx];
            if dot3(n, interior) > off + tol {
                n = [-n[0], -n[1], -n[2]];
                off = -off;
                idx.swap(0, 1);
            }
            keep.push(Face {
                idx,
                normal: n,
                offset: off,
            });
        }
        faces = keep;
        if faces.len() < 4 {
            return Err(Error::DegenerateCell("hull collapsed during insertion".into()));
        }
    }

    Ok(Hull3 { points: pts, faces })
}

impl Hull3 {
    /// Volume by fan decomposition into tetrahedra from the vertex centroid.
    pub fn volume(&self) -> f64 {
        let n = self.points.len() as f64;
        let mut c = [0.0; 3];
        for p in &self.points {
            c[0] += p[0] / n;
            c[1] += p[1] / n;
            c[2] += p[2] / n;
        }
        let mut v = 0.0;
        for f in &self.faces {
            let a = sub3(&self.points[f.idx[0]], &c);
            let b = sub3(&self.points[f.idx[1]], &c);
            let d = sub3(&self.points[f.idx[2]], &c);
            v += dot3(a, cross3(b, d)) / 6.0;
        }
        v.abs()
    }

    /// Facets as (unit outward normal, offset, area), coplanar triangles
    /// merged.
    pub fn facets(&self) -> Vec<([f64; 3], f64, f64)> {
        let scale = self
            .points
            .iter()
            .flat_map(|p| p.iter().map(|c| c.abs()))
            .fold(1.0f64, f64::max);
        let mut groups: Vec<([f64; 3], f64, f64)> = Vec::new();
        for f in &self.faces {
            let e1 = sub3(&self.points[f.idx[1]], &self.points[f.idx[0]]);
            let e2 = sub3(&self.points[f.idx[2]], &self.points[f.idx[0]]);
            let area = 0.5 * norm3(cross3(e1, e2));
            let mut merged = false;
            for g in groups.iter_mut() {
                let same_dir = dot3(g.0, f.normal) > 1.0 - 1e-9;
                if same_dir && (g.1 - f.offset).abs() <= GEOM_TOL * scale {
                    g.2 += area;
                    merged = true;
                    break;
                }
            }
            if !merged {
                groups.push((f.normal, f.offset, area));
            }
        }
        groups
    }
}

/// Hull volume of a 3D point set; 0 when the hull is degenerate.
pub fn volume_3d(points: &[Vector]) -> f64 {
    match hull_3d(points) {
        Ok(h) => h.volume(),
        Err(_) => 0.0,
    }
}

/// Outer facet halfspaces of a 3D hull.
pub fn facets_3d(points: &[Vector]) -> Result<Vec<Halfspace>> {
    let hull = hull_3d(points)?;
    Ok(hull
        .facets()
        .into_iter()
        .map(|(n, off, _)| Halfspace {
            u: Vector(n.to_vec()),
            tau: off,
            orientation: Orientation::Le,
        })
        .collect())
}

/// Canonical representative of a direction for bucketing antipodal pairs.
pub fn canonical_direction(u: &Vector) -> Vector {
    u.scaled(canonical_sign(u.as_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_2d_square_with_interior_points() {
        let pts = vec![
            Vector(vec![1.0, 1.0]),
            Vector(vec![-1.0, 1.0]),
            Vector(vec![0.0, 0.0]),
            Vector(vec![-1.0, -1.0]),
            Vector(vec![1.0, -1.0]),
            Vector(vec![0.5, 0.5]),
        ];
        let hull = convex_hull_2d(&pts);
        assert_eq!(hull.len(), 4);
        assert!((area_2d(&pts) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn hull_3d_cube() {
        let pts: Vec<Vector> = (0..8)
            .map(|m| {
                Vector(vec![
                    if m & 1 == 1 { 1.0 } else { -1.0 },
                    if m & 2 == 2 { 1.0 } else { -1.0 },
                    if m & 4 == 4 { 1.0 } else { -1.0 },
                ])
            })
            .collect();
        let h = hull_3d(&pts).unwrap();
        assert!((h.volume() - 8.0).abs() < 1e-9);
        let facets = h.facets();
        assert_eq!(facets.len(), 6);
        for (_, off, area) in facets {
            assert!((off - 1.0).abs() < 1e-9);
            assert!((area - 4.0).abs() < 1e-9);
        }
    }

    #[test]
    fn hull_3d_tetra_volume() {
        let pts = vec![
            Vector(vec![0.0, 0.0, 0.0]),
            Vector(vec![1.0, 0.0, 0.0]),
            Vector(vec![0.0, 1.0, 0.0]),
            Vector(vec![0.0, 0.0, 1.0]),
        ];
        assert!((volume_3d(&pts) - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn hull_3d_degenerate_is_zero_volume() {
        let pts = vec![
            Vector(vec![0.0, 0.0, 0.0]),
            Vector(vec![1.0, 0.0, 0.0]),
            Vector(vec![0.0, 1.0, 0.0]),
            Vector(vec![1.0, 1.0, 0.0]),
        ];
        assert_eq!(volume_3d(&pts), 0.0);
    }

    #[test]
    fn facets_2d_square() {
        let pts = vec![
            Vector(vec![1.0, 1.0]),
            Vector(vec![-1.0, 1.0]),
            Vector(vec![-1.0, -1.0]),
            Vector(vec![1.0, -1.0]),
        ];
        let f = facets_2d(&pts);
        assert_eq!(f.len(), 4);
        for h in &f {
            assert!((h.tau - 1.0).abs() < 1e-12);
        }
    }
}
