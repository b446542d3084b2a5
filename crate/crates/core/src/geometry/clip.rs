//! Halfspace intersection inside a bounded window, by incremental clipping.
//!
//! The window is a polytope circumscribing the ball `B_R` (a regular 16-gon
//! of tangent lines in 2D, the cube `[-R,R]^3` in 3D). Cells are produced by
//! clipping the window with each halfspace in turn. The returned flag says
//! whether the cell fails to stay strictly inside `B_R`; callers treat such
//! cells as invalid samples and regenerate with a larger window.

use crate::error::{Error, Result};
use crate::geometry::{Halfspace, Orientation, VPolytope, Vector};

/// Result of a windowed halfspace intersection.
#[derive(Clone, Debug)]
pub struct ClipResult {
    pub polytope: VPolytope,
    /// True when some vertex reaches the ball of radius `R` (relative
    /// tolerance `1e-9`), i.e. the window may have truncated the cell.
    pub window_active: bool,
}

/// Number of tangent lines in the 2D window polygon.
const WINDOW_SIDES_2D: usize = 16;

/// Window halfspaces: tangent halfspaces of `B_R`.
pub fn window_halfspaces(dim: usize, radius: f64) -> Result<Vec<Halfspace>> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "window radius must be positive, got {radius}"
        )));
    }
    match dim {
        2 => Ok((0..WINDOW_SIDES_2D)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * (k as f64) / (WINDOW_SIDES_2D as f64);
                Halfspace {
                    u: Vector(vec![a.cos(), a.sin()]),
                    tau: radius,
                    orientation: Orientation::Le,
                }
            })
            .collect()),
        3 => {
            let mut out = Vec::with_capacity(6);
            for i in 0..3 {
                for s in [1.0, -1.0] {
                    let mut u = vec![0.0; 3];
                    u[i] = s;
                    out.push(Halfspace {
                        u: Vector(u),
                        tau: radius,
                        orientation: Orientation::Le,
                    });
                }
            }
            Ok(out)
        }
        d => Err(Error::InvalidParameter(format!(
            "windowed intersection unsupported in dimension {d}"
        ))),
    }
}

/// Intersection of the halfspaces with the window of radius `radius`,
/// returned as a vertex polytope.
pub fn halfspace_intersection(
    halfspaces: &[Halfspace],
    dim: usize,
    radius: f64,
) -> Result<ClipResult> {
    match dim {
        2 => clip_2d(halfspaces, radius),
        3 => clip_3d(halfspaces, radius),
        d => Err(Error::InvalidParameter(format!(
            "windowed intersection unsupported in dimension {d}"
        ))),
    }
}

fn window_active(vertices: &[Vector], radius: f64) -> bool {
    vertices
        .iter()
        .any(|v| v.norm() >= radius * (1.0 - 1e-9))
}

// ---------------------------------------------------------------------------
// 2D

fn clip_2d(halfspaces: &[Halfspace], radius: f64) -> Result<ClipResult> {
    // window polygon: intersection of consecutive tangent lines
    let r_out = radius / (std::f64::consts::PI / WINDOW_SIDES_2D as f64).cos();
    let mut poly: Vec<[f64; 2]> = (0..WINDOW_SIDES_2D)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / (WINDOW_SIDES_2D as f64);
            [r_out * a.cos(), r_out * a.sin()]
        })
        .collect();
    let tol = 1e-12 * (1.0 + radius);
    for h in halfspaces {
        let (a, b) = h.le_form();
        poly = clip_polygon(&poly, [a[0], a[1]], b, tol);
        if poly.is_empty() {
            return Err(Error::EmptyCell);
        }
    }
    let vertices: Vec<Vector> = poly.into_iter().map(|p| Vector(p.to_vec())).collect();
    let active = window_active(&vertices, radius);
    Ok(ClipResult {
        polytope: VPolytope::new(vertices)?,
        window_active: active,
    })
}

/// Sutherland–Hodgman clip of a convex polygon against `<x,a> <= b`.
fn clip_polygon(poly: &[[f64; 2]], a: [f64; 2], b: f64, tol: f64) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let n = poly.len();
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let fp = a[0] * p[0] + a[1] * p[1] - b;
        let fq = a[0] * q[0] + a[1] * q[1] - b;
        let p_in = fp <= tol;
        let q_in = fq <= tol;
        if p_in {
            out.push(p);
        }
        if p_in != q_in {
            let t = fp / (fp - fq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// 3D

type Loop3 = Vec<[f64; 3]>;

fn clip_3d(halfspaces: &[Halfspace], radius: f64) -> Result<ClipResult> {
    // window cube [-R, R]^3 as six quad faces
    let r = radius;
    let mut faces: Vec<Loop3> = vec![
        vec![[r, -r, -r], [r, r, -r], [r, r, r], [r, -r, r]],
        vec![[-r, -r, -r], [-r, -r, r], [-r, r, r], [-r, r, -r]],
        vec![[-r, r, -r], [-r, r, r], [r, r, r], [r, r, -r]],
        vec![[-r, -r, -r], [r, -r, -r], [r, -r, r], [-r, -r, r]],
        vec![[-r, -r, r], [r, -r, r], [r, r, r], [-r, r, r]],
        vec![[-r, -r, -r], [-r, r, -r], [r, r, -r], [r, -r, -r]],
    ];
    let tol = 1e-9 * (1.0 + radius);
    for h in halfspaces {
        let (a, b) = h.le_form();
        let an = [a[0], a[1], a[2]];
        faces = clip_polyhedron(&faces, an, b, tol)?;
        if faces.is_empty() {
            return Err(Error::EmptyCell);
        }
    }
    // gather deduplicated vertices
    let mut vertices: Vec<Vector> = Vec::new();
    for f in &faces {
        for p in f {
            if !vertices
                .iter()
                .any(|v| (v[0] - p[0]).abs() + (v[1] - p[1]).abs() + (v[2] - p[2]).abs() <= 3.0 * tol)
            {
                vertices.push(Vector(p.to_vec()));
            }
        }
    }
    if vertices.is_empty() {
        return Err(Error::EmptyCell);
    }
    let active = window_active(&vertices, radius);
    Ok(ClipResult {
        polytope: VPolytope::new(vertices)?,
        window_active: active,
    })
}

/// Clip every face loop by `<x,a> <= b` and cap the opening with a new face.
fn clip_polyhedron(faces: &[Loop3], a: [f64; 3], b: f64, tol: f64) -> Result<Vec<Loop3>> {
    let mut out: Vec<Loop3> = Vec::with_capacity(faces.len() + 1);
    let mut cut_points: Vec<[f64; 3]> = Vec::new();
    let mut any_clipped = false;
    for face in faces {
        let (clipped, crossings) = clip_face(face, a, b, tol);
        if !crossings.is_empty() || clipped.len() < face.len() {
            any_clipped = true;
        }
        cut_points.extend(crossings);
        if clipped.len() >= 3 {
            out.push(clipped);
        }
    }
    if out.is_empty() {
        return Ok(Vec::new());
    }
    if !any_clipped {
        return Ok(out);
    }
    // deduplicate cut points and order them around the cap plane
    let mut cap: Vec<[f64; 3]> = Vec::new();
    for p in cut_points {
        if !cap
            .iter()
            .any(|q| (q[0] - p[0]).abs() + (q[1] - p[1]).abs() + (q[2] - p[2]).abs() <= 3.0 * tol)
        {
            cap.push(p);
        }
    }
    if cap.len() >= 3 {
        // in-plane basis
        let nn = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
        let n = [a[0] / nn, a[1] / nn, a[2] / nn];
        let pick = if n[0].abs() < 0.9 {
            [1.0, 0.0, 0.0]
        } else {
            [0.0, 1.0, 0.0]
        };
        let e1 = {
            let d = n[0] * pick[0] + n[1] * pick[1] + n[2] * pick[2];
            let v = [pick[0] - d * n[0], pick[1] - d * n[1], pick[2] - d * n[2]];
            let l = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            [v[0] / l, v[1] / l, v[2] / l]
        };
        let e2 = [
            n[1] * e1[2] - n[2] * e1[1],
            n[2] * e1[0] - n[0] * e1[2],
            n[0] * e1[1] - n[1] * e1[0],
        ];
        let c = cap.iter().fold([0.0; 3], |acc, p| {
            [acc[0] + p[0], acc[1] + p[1], acc[2] + p[2]]
        });
        let m = cap.len() as f64;
        let c = [c[0] / m, c[1] / m, c[2] / m];
        cap.sort_by(|p, q| {
            let ang = |p: &[f64; 3]| {
                let d = [p[0] - c[0], p[1] - c[1], p[2] - c[2]];
                let x = d[0] * e1[0] + d[1] * e1[1] + d[2] * e1[2];
                let y = d[0] * e2[0] + d[1] * e2[1] + d[2] * e2[2];
                y.atan2(x)
            };
            ang(p)
                .partial_cmp(&ang(q))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        out.push(cap);
    }
    Ok(out)
}

/// Clip one face loop; returns the surviving part and any points where the
/// plane crosses the face boundary (used to build the cap face).
fn clip_face(face: &Loop3, a: [f64; 3], b: f64, tol: f64) -> (Loop3, Vec<[f64; 3]>) {
    let n = face.len();
    let mut out: Loop3 = Vec::with_capacity(n + 2);
    let mut crossings: Vec<[f64; 3]> = Vec::new();
    for i in 0..n {
        let p = face[i];
        let q = face[(i + 1) % n];
        let fp = a[0] * p[0] + a[1] * p[1] + a[2] * p[2] - b;
        let fq = a[0] * q[0] + a[1] * q[1] + a[2] * q[2] - b;
        let p_in = fp <= tol;
        let q_in = fq <= tol;
        if p_in {
            out.push(p);
        }
        if p_in != q_in {
            let t = fp / (fp - fq);
            let x = [
                p[0] + t * (q[0] - p[0]),
                p[1] + t * (q[1] - p[1]),
                p[2] + t * (q[2] - p[2]),
            ];
            out.push(x);
            crossings.push(x);
        }
    }
    (out, crossings)
}
